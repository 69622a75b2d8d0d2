# harness/runner.py

import logging
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from itertools import product
from typing import Callable, Dict, List, Optional

import numpy as np

from .models import (
    authentication_abort_model,
    collision_model,
    expected_collision_output,
    notify_false_positive_model,
    veto_model,
)
from .plan import ExperimentPlan
from .stats import EXACT_TOLERANCE, Z99, BoundReport, report_exact, report_from_samples
from .trials import TRIALS, noise_spec
from .writers import write_transcript
from ..adversary.bounds import (
    aeg_success_bound,
    aeg_success_model,
    aeg_success_series,
    parity_success_bounds,
    sender_guess_bound,
)
from ..adversary.discrimination import sender_guess_attack
from ..adversary.noise import NoisySource
from ..bellcert.operator import MAX_LR_QUBITS, build_bell_operator, lr_max, spectrum
from ..bellcert.self_test import certify_pool, fidelity_deficit_bounds, self_test
from ..cli.display import DisplayBase
from ..utils.errors import ConfigurationError
from ..utils.rng import make_rng

logger = logging.getLogger(__name__)

PROGRESS_STEPS = 20


class ExperimentRunner:
    """Runs one plan and turns its trials into bound reports"""

    def __init__(self, plan: ExperimentPlan, display: Optional[DisplayBase] = None):
        self.logger = logging.getLogger(__name__)
        self.plan = plan
        self.params = plan.params
        self.display = display

    def update_progress(self, stage: str, status: str = 'working',
                        progress: Optional[int] = None, details: Optional[str] = None):
        if self.display:
            self.display.update(stage, status, progress, details)

    def run(self) -> List[BoundReport]:
        handler: Callable[[], List[BoundReport]] = getattr(self, f"_run_{self.plan.kind.replace('-', '_')}")
        self.logger.info(f"Running {self.plan.key()}")
        started = time.perf_counter()

        self.update_progress('setup', 'done', details=self.plan.kind)
        reports = handler()
        elapsed = int((time.perf_counter() - started) * 1000)
        for report in reports:
            report.wall_time_ms = elapsed

        self.update_progress('compare', 'done',
                             details=f"{sum(r.passed for r in reports)}/{len(reports)} passed")
        return reports

    # trial plumbing

    def _trials(self, kind: str, count: int) -> List[Dict]:
        spec = noise_spec(self.params)
        trial = partial(TRIALS[kind], self.params, spec, self.plan.seed)

        if self.plan.workers > 1:
            chunk = max(1, count // (self.plan.workers * 8))
            with ProcessPoolExecutor(max_workers=self.plan.workers) as pool:
                results = [values for values, _ in pool.map(trial, range(count), chunksize=chunk)]
            self.update_progress('trials', 'done', details=f"{count} trials on {self.plan.workers} workers")
        else:
            results = []
            step = max(1, count // PROGRESS_STEPS)
            for index in range(count):
                results.append(trial(index)[0])
                if (index + 1) % step == 0:
                    self.update_progress('trials', 'working', progress=int(100 * (index + 1) / count))
            self.update_progress('trials', 'done', details=f"{count} trials")

        if self.plan.transcript_path:
            _, transcript = trial(0, keep_transcript=True)
            transcript.verify()
            write_transcript(transcript, self.plan.transcript_path)
            self.logger.info(f"Transcript of trial 0 written to {self.plan.transcript_path}")
        return results

    def _parity_success(self) -> float:
        return NoisySource(noise_spec(self.params)).exact_parity_success()

    def _epsilon(self) -> float:
        return noise_spec(self.params).epsilon

    def _noise_details(self) -> Dict:
        return noise_spec(self.params).describe()

    # deterministic kinds

    def _run_spectrum(self) -> List[BoundReport]:
        n = self.params['n']
        report = spectrum(build_bell_operator(n))
        top = max(report.eigenvalues)
        ok = (report.on_lattice and report.extremal_nondegenerate
              and abs(report.extremal_eigenvector_fidelity_to_ghz - 1) < EXACT_TOLERANCE)
        return [report_exact('spectrum', self.params, top, float(n + 1), 'in', self.plan.seed,
                             details=report.to_dict(), passed=ok and abs(top - (n + 1)) < EXACT_TOLERANCE)]

    def _run_lr_bound(self) -> List[BoundReport]:
        n = self.params['n']
        if n > MAX_LR_QUBITS:
            raise ConfigurationError(f"Local-realistic maximization limited to n <= {MAX_LR_QUBITS}")
        best, witness = lr_max(n)
        details = {'quantum_max': n + 1, 'witness': [list(pair) for pair in witness], 'gap': (n + 1) - best}
        return [report_exact('lr-bound', self.params, best, float(n - 1), '<=', self.plan.seed, details)]

    def _run_guess(self) -> List[BoundReport]:
        n, k = self.params['n'], self.params['k']
        honest = self.params.get('honest') or list(range(1, k + 1))
        if len(honest) != k:
            raise ConfigurationError(f"Honest set {honest} does not hold k={k} agents")
        spec = noise_spec(self.params, 'guess')
        attack = sender_guess_attack(n, spec, honest)
        details = {**attack.to_dict(), 'noise': spec.describe()}
        return [report_exact('guess', self.params, attack.best_attack, attack.bound, '<=',
                             self.plan.seed, details)]

    def _run_bounds_sweep(self) -> List[BoundReport]:
        reports = []
        grid = product(self.params['n_values'] or [], self.params['S_values'] or [],
                       self.params['epsilon_values'] or [])
        for n, S, epsilon in grid:
            lo, hi = parity_success_bounds(n, epsilon)
            bound = aeg_success_bound(n, S, epsilon)
            series = aeg_success_series(S, hi)
            details = {
                'parity_bounds': [lo, hi],
                'aeg_series_at_upper_parity': series,
                'guess_bound_k2': sender_guess_bound(2, epsilon),
                'guess_bound_kn': sender_guess_bound(n, epsilon),
                'fidelity_deficit_bounds': list(fidelity_deficit_bounds(epsilon, n))
                if epsilon <= 2 * (n + 1) else None,
            }
            consistent = 0 <= bound <= 1 + EXACT_TOLERANCE and lo <= hi and abs(series - bound) < EXACT_TOLERANCE
            reports.append(report_exact('bounds-sweep', {'n': n, 'S': S, 'epsilon': epsilon}, bound, 1.0, '<=',
                                        self.plan.seed, details, passed=consistent))
        if not reports:
            raise ConfigurationError("bounds-sweep needs non-empty n, S and epsilon grids")
        return reports

    # stochastic kinds

    def _run_selftest(self) -> List[BoundReport]:
        n = self.params['n']
        source = NoisySource(noise_spec(self.params))
        rng = make_rng(self.plan.seed)
        rounds, threshold = self.params['rounds'], self.params['threshold']

        self.update_progress('trials', 'working', details=f"{rounds} rounds")
        if self.params.get('test_fraction'):
            verdict = certify_pool(source, n, rounds, self.params['test_fraction'], threshold, rng)
        else:
            verdict = self_test(source, n, rounds, threshold, rng)
        self.update_progress('trials', 'done', details=f"{verdict.rounds_used} rounds")

        exact = source.exact_expectation()
        spec = source.spec
        details = {**verdict.to_dict(), 'noise': spec.describe()}
        if spec.epsilon <= 2 * (n + 1):
            lo, hi = fidelity_deficit_bounds(spec.epsilon, n)
            details['fidelity_deficit_bounds'] = [lo, hi]
            details['delta_within_bounds'] = lo - EXACT_TOLERANCE <= spec.delta <= hi + EXACT_TOLERANCE
            if not details['delta_within_bounds']:
                self.logger.warning(
                    f"Fidelity deficit {spec.delta:.6f} outside [{lo:.6f}, {hi:.6f}] for junk '{spec.label}'"
                )

        z = (verdict.estimate - exact) / verdict.stderr if verdict.stderr > 0 else 0.0
        half = Z99 * verdict.stderr
        report = BoundReport('selftest', self.params, verdict.estimate, verdict.stderr,
                             (verdict.estimate - half, verdict.estimate + half), exact, 'in',
                             trials=verdict.rounds_used, seed=self.plan.seed, details={**details, 'z': z})
        self.logger.info(f"selftest: estimate {verdict.estimate:.6f} vs exact {exact:.6f} (z={z:.2f})")
        return [report]

    def _run_parity(self) -> List[BoundReport]:
        results = self._trials('parity', self.params['trials'])
        epsilon = self._epsilon()
        band = parity_success_bounds(self.params['n'], epsilon)
        model = self._parity_success()
        details = {'model': model, 'noise': self._noise_details(),
                   'y1_rate': float(np.mean([r['y'] for r in results]))}
        if model > band[1] + EXACT_TOLERANCE:
            self.logger.warning(
                f"Exact Parity success {model:.6f} exceeds the upper bound {band[1]:.6f} for this junk"
            )
        return [report_from_samples('parity', self.params, [r['correct'] for r in results], band, 'in',
                                    self.plan.seed, details)]

    def _run_veto(self) -> List[BoundReport]:
        results = self._trials('veto', self.params['trials'])
        inputs = self.params.get('inputs') or []
        model = veto_model(self.params['S'], any(inputs), self._parity_success())
        return [report_from_samples('veto', self.params, [r['V'] for r in results], model, 'in',
                                    self.plan.seed, {'noise': self._noise_details()})]

    def _run_notify(self) -> List[BoundReport]:
        results = self._trials('notify', self.params['trials'])
        n, S = self.params['n'], self.params['S']
        details = {
            'false_positive_rate': float(np.mean([r['false_positive'] for r in results])),
            'false_positive_model': notify_false_positive_model(n, S, self._parity_success()),
            'noise': self._noise_details(),
        }
        return [report_from_samples('notify', self.params, [r['receiver_hit'] for r in results],
                                    1 - 2.0 ** -S, 'in', self.plan.seed, details)]

    def _run_authenticate(self) -> List[BoundReport]:
        results = self._trials('authenticate', self.params['trials'])
        n, S = self.params['n'], self.params['S']
        model = authentication_abort_model(n, S, self.params.get('auth_tolerance') or 0,
                                           self._parity_success(), self.params.get('tamper'))
        details = {'mean_mismatches': float(np.mean([r['mismatches'] for r in results])),
                   'noise': self._noise_details()}
        return [report_from_samples('authenticate', self.params, [r['abort'] for r in results], model, 'in',
                                    self.plan.seed, details)]

    def _run_collision(self) -> List[BoundReport]:
        results = self._trials('collision', self.params['trials'])
        wishers = sum(self.params.get('wish') or [1])
        expected = expected_collision_output(wishers)
        model = collision_model(wishers, self.params['S'])
        counts = Counter(r['V'] for r in results)
        details = {'expected_output': expected, 'counts': {str(v): counts.get(v, 0) for v in (0, 1, 2)},
                   'model': {str(v): p for v, p in model.items()}, 'noise': self._noise_details()}
        return [report_from_samples('collision', self.params, [int(r['V'] == expected) for r in results],
                                    model[expected], 'in', self.plan.seed, details)]

    def _run_aeg(self) -> List[BoundReport]:
        results = self._trials('aeg', self.params['trials'])
        n, S = self.params['n'], self.params['S']
        epsilon = self._epsilon()
        bound = aeg_success_bound(n, S, epsilon)
        parity_success = self._parity_success()
        model = aeg_success_model(S, parity_success)

        repetitions = sum(r['repetitions'] for r in results)
        successes = sum(r['success'] for r in results)
        fidelities = [r['fidelity'] for r in results if r['success'] and r['fidelity'] is not None]
        details = {
            'model': model,
            'series_at_exact_parity': aeg_success_series(S, parity_success),
            'abort_reasons': dict(sorted(Counter(r['reason'] or 'none' for r in results).items())),
            'entry_rate': successes / repetitions if repetitions else 0.0,
            'entry_rate_expected': 2.0 ** -S,
            'mean_repetitions': repetitions / len(results),
            'mean_pair_fidelity': float(np.mean(fidelities)) if fidelities else None,
            'noise': self._noise_details(),
        }
        if model > bound + EXACT_TOLERANCE:
            self.logger.warning(f"Exact loop success {model:.6f} exceeds the closed-form bound {bound:.6f}")
        return [report_from_samples('aeg', self.params, [r['success'] for r in results], bound, '<=',
                                    self.plan.seed, details)]

    def _run_teleport(self) -> List[BoundReport]:
        results = self._trials('teleport', self.params['trials'])
        delivered = [r for r in results if r['success']]
        parity_success = self._parity_success()
        details = {
            'delivery_rate': len(delivered) / len(results),
            'abort_reasons': dict(sorted(Counter(r['reason'] or 'none' for r in results).items())),
            'correction_bits_expected': parity_success ** 2,
            'noise': self._noise_details(),
        }
        if not delivered:
            self.logger.warning(f"teleport: none of {len(results)} trials delivered the payload")
            return [report_exact('teleport', self.params, 0.0, 0.0, '>=', self.plan.seed, details, passed=False)]

        channel = float(np.mean([r['channel_fidelity'] for r in delivered]))
        details.update({
            'mean_pair_fidelity': float(np.mean([r['pair_fidelity'] for r in delivered])),
            'channel_fidelity': channel,
            'correction_bits_rate': float(np.mean([r['bits_correct'] for r in delivered])),
        })
        # both correction rounds succeed with p^2; a wrong bit still scores >= 0
        bound = parity_success ** 2 * channel
        return [report_from_samples('teleport', self.params, [r['fidelity'] for r in delivered], bound, '>=',
                                    self.plan.seed, details)]


def run_experiment(plan: ExperimentPlan, display: Optional[DisplayBase] = None) -> List[BoundReport]:
    """
    Run a plan; deterministic given the plan and its seed

    Returns:
        One report per experiment (several for bounds-sweep)
    """
    return ExperimentRunner(plan, display).run()
