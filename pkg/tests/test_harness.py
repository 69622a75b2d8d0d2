# tests/test_harness.py

import json
import logging
import os
import pytest
from unittest.mock import MagicMock, patch
from ghz_anon.config.config_loader import ConfigLoader
from ghz_anon.harness.models import (
    authentication_abort_model,
    collision_model,
    expected_collision_output,
    notify_false_positive_model,
    replay_mismatch_probability,
    veto_model,
)
from ghz_anon.harness.plan import ExperimentPlan, KIND_PARAMS
from ghz_anon.harness.runner import ExperimentRunner, run_experiment
from ghz_anon.harness.stats import (
    Z99,
    BoundReport,
    judge,
    model_spread,
    report_exact,
    summarize,
)
from ghz_anon.harness.trials import default_wishes, noise_spec
from ghz_anon.harness.writers import serialize_reports, to_csv, write_reports, write_text
from ghz_anon.utils.errors import ConfigurationError, DomainError

CONFIG_PATH = os.path.join(os.path.dirname(__file__), '..', 'ghz_anon', 'config', 'config.yaml')


@pytest.fixture
def loader():
    return ConfigLoader(CONFIG_PATH, env_file=None)


def plan(kind, **params):
    """Plan with packaged defaults and the given overrides"""
    return ExperimentPlan.build(kind, params, config_loader=ConfigLoader(CONFIG_PATH, env_file=None), seed=1)


# stats

def test_summarize():
    """Test mean, standard error and clipped interval"""
    estimate, stderr, (lo, hi) = summarize([1, 0, 1, 1])
    assert estimate == pytest.approx(0.75)
    assert stderr == pytest.approx(0.5 / 2)
    assert lo == pytest.approx(max(0.0, 0.75 - Z99 * 0.25))
    assert hi == 1.0


def test_summarize_constant_and_empty():
    """Test zero-variance samples and empty input"""
    assert summarize([1, 1, 1]) == (1.0, 0.0, (1.0, 1.0))
    assert summarize([3.0], probability=False) == (3.0, 0.0, (3.0, 3.0))
    with pytest.raises(ValueError):
        summarize([])


def test_z99():
    """Test the two-sided 99% normal quantile"""
    assert Z99 == pytest.approx(2.5758, abs=1e-4)


@pytest.mark.parametrize("ci,bound,relation,expected", [
    ((0.2, 0.4), 0.5, '<=', True),
    ((0.2, 0.6), 0.5, '<=', False),
    ((0.6, 0.8), 0.5, '>=', True),
    ((0.4, 0.8), 0.5, '>=', False),
    ((0.4, 0.6), 0.5, 'in', True),
    ((0.6, 0.7), 0.5, 'in', False),
    ((0.85, 0.92), (0.9, 0.975), 'in', True),
    ((0.98, 0.99), (0.9, 0.975), 'in', False),
])
def test_judge(ci, bound, relation, expected):
    """Test interval verdicts"""
    assert judge(ci, bound, relation) is expected


def test_judge_errors():
    """Test invalid relations and one-sided bands"""
    with pytest.raises(ValueError):
        judge((0, 1), 0.5, '<')
    with pytest.raises(ValueError):
        judge((0, 1), (0.1, 0.2), '<=')


def test_model_spread():
    """Test the binomial half-width of a model probability"""
    assert model_spread(0.5, 100) == pytest.approx(Z99 * 0.05)
    assert model_spread(1.0, 100) == 0.0


def test_bound_report_to_dict():
    """Test report fields, timing and JSON-safe values"""
    report = BoundReport('parity', {'n': 3}, 0.95, 0.01, (0.92, 0.98), (0.9, 0.975), 'in', 100, 7,
                         wall_time_ms=12)
    data = report.to_dict()
    assert data['pass'] is True
    assert data['bound'] == [0.9, 0.975]
    assert data['ci99'] == [0.92, 0.98]
    assert 'wall_time_ms' not in data
    assert set(data) == {'experiment', 'params', 'estimate', 'stderr', 'ci99', 'bound', 'relation',
                         'pass', 'trials', 'seed', 'rng', 'details'}
    assert report.to_dict(timing=True)['wall_time_ms'] == 12
    with pytest.raises(ValueError):
        BoundReport('parity', {}, 0.5, 0.0, (0.5, 0.5), 0.5, '==', 1, 0)


def test_report_exact_explicit_verdict():
    """Test an explicit verdict overrides the interval check"""
    report = report_exact('spectrum', {'n': 3}, 4.0, 4.0, 'in', 0, passed=False)
    assert report.passed is False
    assert report.trials == 1


# models

def test_veto_model():
    """Test the OR output probability"""
    assert veto_model(3, True) == pytest.approx(1 - 1 / 8)
    assert veto_model(3, False) == 0.0
    assert veto_model(2, False, 0.9) == pytest.approx(1 - 0.81)


def test_notify_false_positive_model():
    """Test the false positive probability"""
    assert notify_false_positive_model(5, 8) == 0.0
    assert notify_false_positive_model(3, 1, 0.9) == pytest.approx(1 - 0.81)


def test_replay_mismatch_probability():
    """Test per-round replay mismatch"""
    assert replay_mismatch_probability(5, 1.0) == 0.0
    assert replay_mismatch_probability(5, 0.5) == pytest.approx(0.5)
    assert replay_mismatch_probability(1, 0.9) == pytest.approx(0.1)


def test_authentication_abort_model():
    """Test abort probabilities with and without tampering"""
    assert authentication_abort_model(5, 4, 0) == 0.0
    assert authentication_abort_model(5, 4, 0, tamper={2: 3}) == pytest.approx(1.0)
    assert authentication_abort_model(5, 4, 1, tamper={2: 3}) == pytest.approx(0.0)
    # two tampers in one round cancel
    assert authentication_abort_model(5, 4, 0, tamper={2: 3, 4: 3}) == pytest.approx(0.0)

    p = replay_mismatch_probability(3, 0.95)
    assert authentication_abort_model(3, 2, 0, 0.95) == pytest.approx(1 - (1 - p) ** 2)


@pytest.mark.parametrize("wishers", [0, 1, 2, 3, 4])
def test_collision_model_is_a_distribution(wishers):
    """Test the collision output distribution sums to one"""
    model = collision_model(wishers, 3)
    assert sum(model.values()) == pytest.approx(1.0)
    assert all(p >= 0 for p in model.values())


def test_collision_model_values():
    """Test closed forms for few wishers"""
    assert collision_model(0, 8) == {0: 1.0, 1: 0.0, 2: 0.0}
    assert collision_model(1, 8)[1] == pytest.approx(1 - 2 ** -8)
    assert collision_model(2, 8)[2] == pytest.approx((1 - 2 ** -8) ** 2)
    assert expected_collision_output(5) == 2
    with pytest.raises(DomainError):
        collision_model(-1, 3)


# plan

def test_plan_build_merges_defaults(loader):
    """Test protocol, experiment and command-line layers"""
    built = ExperimentPlan.build('aeg', {'n': 3}, config_loader=loader)
    assert built.params['S'] == 3
    assert built.params['n'] == 3
    assert built.params['max_repetitions'] == 2000
    assert built.params['trials'] == 20000
    assert built.seed == 0
    assert set(built.params) == set(KIND_PARAMS['aeg'])


def test_plan_build_converts_values(loader):
    """Test string overrides are converted"""
    built = ExperimentPlan.build('authenticate', {'tamper': '2:1', 'S': '4'}, config_loader=loader, seed=5)
    assert built.params['tamper'] == {2: 1}
    assert built.params['S'] == 4
    assert built.seed == 5

    sweep = ExperimentPlan.build('bounds-sweep', {'epsilon_values': '0,0.5'}, config_loader=loader)
    assert sweep.params['epsilon_values'] == [0.0, 0.5]
    assert sweep.params['n_values'] == [3, 5, 7]


def test_plan_delta_replaces_epsilon(loader):
    """Test delta defines the noise when given"""
    built = ExperimentPlan.build('parity', {'delta': 0.1}, config_loader=loader)
    assert built.params['epsilon'] is None
    assert noise_spec(built.params).delta == pytest.approx(0.1)
    with pytest.raises(ConfigurationError):
        ExperimentPlan.build('parity', {'delta': 0.1, 'epsilon': 0.1}, config_loader=loader)


def test_plan_validation(loader):
    """Test invalid plans"""
    with pytest.raises(DomainError):
        ExperimentPlan.build('parity', {'n': 4}, config_loader=loader)
    with pytest.raises(DomainError):
        ExperimentPlan.build('bounds-sweep', {'n_values': '3,6'}, config_loader=loader)
    with pytest.raises(ConfigurationError):
        ExperimentPlan.build('parity', {'trials': 0}, config_loader=loader)
    with pytest.raises(ConfigurationError):
        ExperimentPlan.build('veto', {'S': 0}, config_loader=loader)
    with pytest.raises(DomainError):
        ExperimentPlan.build('parity', {'epsilon': -1.0}, config_loader=loader)
    with pytest.raises(ConfigurationError):
        ExperimentPlan.build('parity', {'inputs': '1x0'}, config_loader=loader)
    with pytest.raises(ConfigurationError):
        ExperimentPlan.build('broadcast', {}, config_loader=loader)
    with pytest.raises(ConfigurationError, match="Unknown payload"):
        ExperimentPlan.build('teleport', {'payload': 'psi'}, config_loader=loader)
    with pytest.raises(ConfigurationError):
        ExperimentPlan('spectrum', {'n': 3}, workers=0)


def test_plan_key_is_canonical():
    """Test the ledger key ignores parameter order"""
    a = ExperimentPlan('spectrum', {'n': 3}, seed=2)
    b = ExperimentPlan('spectrum', dict([('n', 3)]), seed=2)
    assert a.key() == b.key() == 'spectrum:{"n": 3}:seed=2'


def test_default_wishes():
    """Test a single wisher when none are given"""
    assert default_wishes({'n': 3, 'wish': None}) == [1, 0, 0]
    assert default_wishes({'n': 3, 'wish': [0, 1, 1]}) == [0, 1, 1]


# runner

def test_run_spectrum():
    """Test the spectrum experiment"""
    reports = run_experiment(plan('spectrum', n=5))
    assert len(reports) == 1
    assert reports[0].passed
    assert reports[0].estimate == pytest.approx(6.0)
    assert reports[0].details['multiplicities'] == {'6': 1, '2': 15, '-2': 15, '-6': 1}


def test_run_lr_bound():
    """Test the local-realistic maximum"""
    report = run_experiment(plan('lr-bound', n=5))[0]
    assert report.passed
    assert report.estimate == 4.0
    assert report.details['gap'] == 2


def test_run_guess():
    """Test the guessing attack against its bound"""
    report = run_experiment(plan('guess', n=5, k=2, epsilon=0.04))[0]
    assert report.passed
    assert report.bound == pytest.approx(0.7)
    assert report.estimate == pytest.approx(0.572835, abs=1e-5)
    assert report.estimate > 0.5
    assert report.details['noise']['junk'] == 'lattice-top'


def test_run_guess_honest_set_size():
    """Test an honest set that does not match k"""
    with pytest.raises(ConfigurationError):
        run_experiment(plan('guess', n=5, k=3, honest='1,2'))


def test_run_bounds_sweep():
    """Test one consistent report per grid point"""
    reports = run_experiment(plan('bounds-sweep', n_values='3,5', S_values='1,3', epsilon_values='0,0.5'))
    assert len(reports) == 8
    assert all(r.passed for r in reports)
    point = next(r for r in reports if r.params == {'n': 5, 'S': 3, 'epsilon': 0.5})
    assert point.estimate == pytest.approx(0.65597, abs=1e-5)


def test_run_selftest():
    """Test the self-test on an ideal resource"""
    report = run_experiment(plan('selftest', n=3, rounds=400))[0]
    assert report.passed
    assert report.estimate == pytest.approx(4.0)
    assert report.details['accepted'] is True


def test_run_selftest_pool():
    """Test the pool certification variant"""
    report = run_experiment(plan('selftest', n=3, rounds=1000, test_fraction=0.5))[0]
    assert report.details['certified_copies'] == 1000 - report.trials


def test_run_selftest_minus_junk_warns(caplog):
    """Test a deficit below the fidelity lower bound is flagged"""
    with caplog.at_level(logging.WARNING):
        report = run_experiment(plan('selftest', n=3, rounds=200, epsilon=0.4))[0]
    assert report.details['fidelity_deficit_bounds'] == pytest.approx([0.1, 0.1])
    assert report.details['delta_within_bounds'] is False
    assert "Fidelity deficit 0.050000 outside" in caplog.text


def test_run_parity_ideal():
    """Test parity on an ideal resource"""
    report = run_experiment(plan('parity', n=3, inputs='110', trials=50))[0]
    assert report.estimate == 1.0
    assert report.bound == (1.0, 1.0)
    assert report.passed
    assert report.details['y1_rate'] == 0.0


@pytest.mark.statistical
def test_run_parity_noisy():
    """Test the noisy parity success against its band"""
    report = run_experiment(plan('parity', n=3, inputs='100', trials=600, epsilon=0.4))[0]
    assert report.details['model'] == pytest.approx(0.95)
    assert report.passed


def test_run_veto_no_inputs():
    """Test the OR with nobody vetoing"""
    report = run_experiment(plan('veto', n=3, S=3, trials=40))[0]
    assert report.estimate == 0.0
    assert report.passed


def test_run_notify():
    """Test the notification hit rate"""
    report = run_experiment(plan('notify', n=3, S=8, trials=60))[0]
    assert report.bound == pytest.approx(1 - 2 ** -8)
    assert report.details['false_positive_rate'] == 0.0
    assert report.passed


def test_run_authenticate_tampered():
    """Test tampering makes every run abort"""
    report = run_experiment(plan('authenticate', n=3, S=3, trials=30, tamper='3:2'))[0]
    assert report.estimate == 1.0
    assert report.bound == pytest.approx(1.0)
    assert report.passed


def test_run_collision_nobody():
    """Test collision detection without wishers"""
    report = run_experiment(plan('collision', n=3, S=3, wish='000', trials=30))[0]
    assert report.details['expected_output'] == 0
    assert report.estimate == 1.0
    assert report.passed


def test_run_aeg_ideal():
    """Test entanglement generation never aborts on an ideal resource"""
    report = run_experiment(plan('aeg', n=3, S=1, trials=30, max_repetitions=200))[0]
    assert report.estimate == 1.0
    assert report.bound == pytest.approx(1.0)
    assert report.passed
    assert report.details['abort_reasons'] == {'none': 30}
    assert report.details['mean_pair_fidelity'] == pytest.approx(1.0)


def test_run_aeg_session():
    """Test the session variant reports notification aborts"""
    report = run_experiment(plan('aeg', n=3, S=2, trials=20, max_repetitions=200, session='true'))[0]
    assert set(report.details['abort_reasons']) <= {'none', 'notification'}


@pytest.mark.statistical
@pytest.mark.parametrize("junk", ['minus', 'lattice-top'])
@pytest.mark.parametrize("epsilon", [0.1, 0.4])
def test_run_parity_bands(junk, epsilon):
    """Test the exact and sampled parity success sit inside the band at n = 5"""
    report = run_experiment(plan('parity', n=5, inputs='10110', trials=800, epsilon=epsilon, junk=junk))[0]
    lo, hi = report.bound
    assert (lo, hi) == pytest.approx((1 - epsilon / 4, 1 - epsilon / 16))
    assert report.details['model'] == pytest.approx(1 - epsilon / 12)
    assert lo <= report.details['model'] <= hi
    assert report.passed


@pytest.mark.statistical
def test_run_veto_single_vetoer():
    """Test one veto gives V = 1 with probability 1 - 2^-S"""
    report = run_experiment(plan('veto', n=3, S=5, inputs='100', trials=4000))[0]
    assert report.bound == pytest.approx(1 - 2 ** -5)
    assert report.estimate == pytest.approx(1 - 2 ** -5, abs=0.015)
    assert report.passed


@pytest.mark.slow
@pytest.mark.statistical
def test_run_aeg_noisy():
    """Test the noisy loop success against the closed-form bound"""
    report = run_experiment(plan('aeg', n=5, S=3, epsilon=0.5, trials=4000, max_repetitions=2000))[0]
    assert report.bound == pytest.approx(0.65597, abs=1e-5)
    assert report.details['model'] == pytest.approx(0.5845, abs=1e-3)
    assert report.passed
    assert report.estimate <= report.bound
    assert abs(report.estimate - report.details['model']) < 5 * report.stderr


def test_run_teleport_ideal():
    """Test every payload arrives on an ideal resource"""
    report = run_experiment(plan('teleport', n=3, S=1, trials=20, max_repetitions=200))[0]
    assert report.passed
    assert report.estimate == pytest.approx(1.0)
    assert report.bound == pytest.approx(1.0)
    assert report.details['delivery_rate'] == 1.0
    assert report.details['correction_bits_rate'] == 1.0
    assert report.details['mean_pair_fidelity'] == pytest.approx(1.0)


@pytest.mark.statistical
def test_run_teleport_noisy():
    """Test the output fidelity stays above the correction-bit bound"""
    report = run_experiment(plan('teleport', n=3, S=1, epsilon=0.4, payload='0', trials=1500,
                                 max_repetitions=200))[0]
    assert report.details['correction_bits_expected'] == pytest.approx(0.95 ** 2)
    assert report.details['channel_fidelity'] == pytest.approx(1.0)
    assert report.estimate == pytest.approx(0.95, abs=0.03)
    assert report.passed


def test_run_teleport_nothing_delivered():
    """Test a run with no deliveries fails"""
    aborted = {'success': 0, 'reason': 'timeout'}
    with patch.object(ExperimentRunner, '_trials', return_value=[aborted] * 5):
        report = run_experiment(plan('teleport', n=3, S=1, trials=5))[0]
    assert not report.passed
    assert report.estimate == 0.0
    assert report.details['abort_reasons'] == {'timeout': 5}


def test_runner_reports_progress():
    """Test stages reach the display"""
    display = MagicMock()
    ExperimentRunner(plan('veto', n=3, S=1, trials=20), display).run()
    stages = [c.args[0] for c in display.update.call_args_list]
    assert stages[0] == 'setup'
    assert 'trials' in stages
    assert stages[-1] == 'compare'


def test_runner_writes_transcript(tmp_path):
    """Test the first trial's transcript is written as JSONL"""
    path = tmp_path / 'out' / 'parity.jsonl'
    built = ExperimentPlan.build('parity', {'n': 3, 'inputs': '100', 'trials': 5},
                                 config_loader=ConfigLoader(CONFIG_PATH, env_file=None),
                                 transcript_path=str(path))
    run_experiment(built)
    lines = path.read_text().splitlines()
    assert len(lines) == 7
    assert json.loads(lines[-1])['name'] == 'y'


def test_runs_are_reproducible():
    """Test equal plans give equal reports"""
    first = run_experiment(plan('veto', n=3, S=2, inputs='100', trials=50))
    second = run_experiment(plan('veto', n=3, S=2, inputs='100', trials=50))
    assert serialize_reports(first) == serialize_reports(second)


@pytest.mark.slow
def test_workers_match_sequential():
    """Test worker processes reproduce the sequential estimate"""
    loader = ConfigLoader(CONFIG_PATH, env_file=None)
    overrides = {'n': 3, 'S': 2, 'inputs': '100', 'trials': 40}
    sequential = run_experiment(ExperimentPlan.build('veto', overrides, config_loader=loader))
    parallel = run_experiment(ExperimentPlan.build('veto', overrides, config_loader=loader, workers=2))
    assert sequential[0].estimate == parallel[0].estimate


# writers

@pytest.fixture
def reports():
    return [
        BoundReport('parity', {'n': 3, 'inputs': [1, 0, 0]}, 1.0, 0.0, (1.0, 1.0), (1.0, 1.0), 'in', 10, 0,
                    details={'model': 1.0}),
        BoundReport('lr-bound', {'n': 5}, 4.0, 0.0, (4.0, 4.0), 4.0, '<=', 1, 0),
    ]


def test_json_lines(reports):
    """Test one sorted JSON object per line"""
    text = serialize_reports(reports, 'json')
    lines = text.splitlines()
    assert len(lines) == 2
    assert text.endswith('\n')
    first = json.loads(lines[0])
    assert first['experiment'] == 'parity'
    assert list(first) == sorted(first)


def test_csv(reports):
    """Test flattened CSV rows"""
    lines = to_csv(reports).splitlines()
    assert lines[0] == 'experiment,params,estimate,stderr,ci99_lo,ci99_hi,bound,relation,pass,trials,seed,rng'
    assert lines[1].startswith('parity,"inputs=1,0,0;n=3",1.0,0.0,1.0,1.0,"1.0,1.0",in,True,10,0,')
    assert 'wall_time_ms' in to_csv(reports, timing=True).splitlines()[0]


def test_unknown_format(reports):
    """Test unsupported formats"""
    with pytest.raises(ValueError, match="Unknown report format"):
        serialize_reports(reports, 'xml')


def test_write_reports(tmp_path, reports):
    """Test reports are written with a trailing newline"""
    path = tmp_path / 'nested' / 'report.json'
    text = write_reports(reports, str(path))
    assert path.read_text() == text


def test_write_text_adds_newline(tmp_path):
    """Test newline termination"""
    path = tmp_path / 'plain.txt'
    write_text('abc', str(path))
    assert path.read_text() == 'abc\n'
