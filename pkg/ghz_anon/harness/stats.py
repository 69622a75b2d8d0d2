# harness/stats.py
"""
Monte Carlo summaries and bound verdicts.

stderr is the sample standard deviation over sqrt(trials); the 99% interval is
the normal approximation estimate +/- z * stderr, clipped to [0, 1] for
probabilities. One-sided claims are judged on the conservative interval edge.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.stats import norm

from ..utils.data_converter import to_report_value
from ..utils.rng import rng_version

logger = logging.getLogger(__name__)

CONFIDENCE = 0.99
Z99 = float(norm.ppf(0.5 + CONFIDENCE / 2))
EXACT_TOLERANCE = 1e-9
RELATIONS = ('<=', '>=', 'in')

Bound = Union[float, Tuple[float, float]]


def summarize(samples: Sequence[float], probability: bool = True) -> Tuple[float, float, Tuple[float, float]]:
    """
    Mean, standard error and 99% normal interval of per-trial samples

    Args:
        samples: One value per trial
        probability: Clip the interval to [0, 1]
    """
    values = np.asarray(samples, dtype=float)
    if values.size == 0:
        raise ValueError("Cannot summarize zero trials")
    estimate = float(values.mean())
    stderr = float(values.std(ddof=1) / np.sqrt(values.size)) if values.size > 1 else 0.0
    lo, hi = estimate - Z99 * stderr, estimate + Z99 * stderr
    if probability:
        lo, hi = max(0.0, lo), min(1.0, hi)
    return estimate, stderr, (lo, hi)


def exact_summary(value: float) -> Tuple[float, float, Tuple[float, float]]:
    """Summary of a deterministic quantity: zero-width interval"""
    return float(value), 0.0, (float(value), float(value))


def judge(ci99: Tuple[float, float], bound: Bound, relation: str, tol: float = EXACT_TOLERANCE) -> bool:
    """
    Is the interval consistent with ``estimate <relation> bound``

    '<=' uses the upper edge, '>=' the lower edge. 'in' passes when the interval
    contains the bound, or overlaps it when the bound is a (lo, hi) band.
    """
    lo, hi = ci99
    if relation == '<=':
        return hi <= _scalar(bound) + tol
    if relation == '>=':
        return lo >= _scalar(bound) - tol
    if relation == 'in':
        if isinstance(bound, (tuple, list)):
            band_lo, band_hi = bound
            return lo <= band_hi + tol and hi >= band_lo - tol
        return lo - tol <= bound <= hi + tol
    raise ValueError(f"Unknown relation '{relation}'")


def _scalar(bound: Bound) -> float:
    if isinstance(bound, (tuple, list)):
        raise ValueError(f"One-sided relations need a scalar bound, got {bound}")
    return float(bound)


@dataclass
class BoundReport:
    """One estimate compared with one theoretical value"""

    experiment: str
    params: Dict[str, Any]
    estimate: float
    stderr: float
    ci99: Tuple[float, float]
    bound: Bound
    relation: str
    trials: int
    seed: int
    wall_time_ms: int = 0
    details: Dict[str, Any] = field(default_factory=dict)
    passed: Optional[bool] = None

    def __post_init__(self):
        if self.relation not in RELATIONS:
            raise ValueError(f"Unknown relation '{self.relation}'")
        if self.passed is None:
            self.passed = judge(self.ci99, self.bound, self.relation)

    def to_dict(self, timing: bool = False) -> Dict[str, Any]:
        """Flat report; ``wall_time_ms`` only when timing is requested"""
        report = {
            'experiment': self.experiment,
            'params': self.params,
            'estimate': self.estimate,
            'stderr': self.stderr,
            'ci99': list(self.ci99),
            'bound': list(self.bound) if isinstance(self.bound, (tuple, list)) else self.bound,
            'relation': self.relation,
            'pass': bool(self.passed),
            'trials': self.trials,
            'seed': self.seed,
            'rng': rng_version(),
            'details': self.details,
        }
        if timing:
            report['wall_time_ms'] = self.wall_time_ms
        return to_report_value(report)


def model_spread(probability: float, trials: int) -> float:
    """Half-width of the 99% normal interval of a binomial rate with success ``probability``"""
    probability = min(1.0, max(0.0, float(probability)))
    return Z99 * float(np.sqrt(probability * (1 - probability) / trials))


def report_from_samples(experiment: str, params: Dict[str, Any], samples: Sequence[float], bound: Bound,
                        relation: str, seed: int, details: Optional[Dict[str, Any]] = None) -> BoundReport:
    """
    Report for per-trial 0/1 samples

    A scalar 'in' model is judged on the wider of the sample interval and the
    model's own binomial interval, so runs whose trials all agree can still match
    a model probability strictly inside (0, 1).
    """
    estimate, stderr, ci99 = summarize(samples)
    passed = None
    if relation == 'in' and not isinstance(bound, (tuple, list)):
        spread = model_spread(bound, len(samples))
        passed = judge((min(ci99[0], estimate - spread), max(ci99[1], estimate + spread)), bound, relation)
    report = BoundReport(experiment, params, estimate, stderr, ci99, bound, relation,
                         trials=len(samples), seed=seed, details=details or {}, passed=passed)
    logger.info(
        f"{experiment}: estimate {estimate:.6f} +/- {stderr:.6f} vs {relation} {bound} "
        f"over {len(samples)} trials -> {'pass' if report.passed else 'FAIL'}"
    )
    if not report.passed:
        logger.warning(f"{experiment}: interval {ci99} inconsistent with {relation} {bound}")
    return report


def report_exact(experiment: str, params: Dict[str, Any], value: float, bound: Bound, relation: str,
                 seed: int, details: Optional[Dict[str, Any]] = None,
                 passed: Optional[bool] = None) -> BoundReport:
    estimate, stderr, ci99 = exact_summary(value)
    report = BoundReport(experiment, params, estimate, stderr, ci99, bound, relation,
                         trials=1, seed=seed, details=details or {}, passed=passed)
    logger.info(f"{experiment}: value {estimate:.9g} vs {relation} {bound} -> {'pass' if report.passed else 'FAIL'}")
    if not report.passed:
        logger.warning(f"{experiment}: {estimate:.9g} inconsistent with {relation} {bound}")
    return report
