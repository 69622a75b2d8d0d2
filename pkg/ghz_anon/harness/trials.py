# harness/trials.py
"""
Single Monte Carlo trials, one function per protocol experiment.

Each trial derives its own stream from (seed, trial_index) and returns plain
values, so trials can run in any order or in worker processes.
"""

from typing import Any, Dict, Optional, Tuple

from ..adversary.noise import NoiseSpec, NoisySource, noise_from_delta, noise_from_epsilon
from ..protocols.anonymous import (
    run_authentication,
    run_collision_detection,
    run_logical_or,
    run_notification,
    run_parity,
)
from ..protocols.entanglement import anonymous_teleport, run_aeg, run_aeg_session, teleport_fidelity
from ..protocols.network import NetworkConfig
from ..protocols.transcript import Transcript
from ..utils.rng import trial_rng

TrialOutput = Tuple[Dict[str, Any], Optional[Transcript]]


DEFAULT_JUNK = 'minus'

# |psi-> junk commutes with every Z_i, so the guessing attack needs eigenspace junk
KIND_JUNK = {'guess': 'lattice-top'}


def noise_spec(params: Dict[str, Any], kind: Optional[str] = None) -> NoiseSpec:
    """Resource noise described by a plan's epsilon / delta / junk parameters"""
    junk = params.get('junk') or KIND_JUNK.get(kind, DEFAULT_JUNK)
    if params.get('delta') is not None:
        return noise_from_delta(params['n'], params['delta'], junk)
    return noise_from_epsilon(params['n'], params.get('epsilon') or 0.0, junk)


def network(params: Dict[str, Any], spec: NoiseSpec, seed: int, index: int) -> NetworkConfig:
    return NetworkConfig(
        n=params['n'],
        S=params.get('S') or 1,
        source=NoisySource(spec),
        rng=trial_rng(seed, index),
        auth_tolerance=params.get('auth_tolerance') or 0,
        verification_tolerance=params.get('verification_tolerance') or 0.0,
    )


def default_inputs(params: Dict[str, Any], name: str = 'inputs'):
    return params.get(name) or [0] * params['n']


def parity_trial(params, spec, seed, index, keep_transcript=False) -> TrialOutput:
    cfg = network(params, spec, seed, index)
    inputs = default_inputs(params)
    y, transcript = run_parity(cfg, inputs, params.get('withhold'))
    return {'y': y, 'correct': int(y == sum(inputs) % 2)}, transcript if keep_transcript else None


def veto_trial(params, spec, seed, index, keep_transcript=False) -> TrialOutput:
    cfg = network(params, spec, seed, index)
    V, transcript = run_logical_or(cfg, default_inputs(params))
    return {'V': V}, transcript if keep_transcript else None


def notify_trial(params, spec, seed, index, keep_transcript=False) -> TrialOutput:
    cfg = network(params, spec, seed, index)
    receiver = params['receiver']
    beliefs, transcript = run_notification(cfg, params['sender'], receiver)
    others = [b for agent, b in enumerate(beliefs, 1) if agent != receiver]
    values = {'receiver_hit': beliefs[receiver - 1], 'false_positive': int(any(others))}
    return values, transcript if keep_transcript else None


def authenticate_trial(params, spec, seed, index, keep_transcript=False) -> TrialOutput:
    cfg = network(params, spec, seed, index)
    _, notification = run_notification(cfg, params['sender'], params['receiver'])
    abort, transcript = run_authentication(cfg, notification, params['sender'], params.get('tamper'))
    return {'abort': int(abort), 'mismatches': transcript.meta['auth_mismatches']}, \
        transcript if keep_transcript else None


def collision_trial(params, spec, seed, index, keep_transcript=False) -> TrialOutput:
    cfg = network(params, spec, seed, index)
    V, transcript = run_collision_detection(cfg, default_wishes(params))
    return {'V': V}, transcript if keep_transcript else None


def default_wishes(params: Dict[str, Any]):
    """Wish bits, a single wisher (agent 1) when omitted"""
    wishes = params.get('wish')
    if wishes is None:
        wishes = [1] + [0] * (params['n'] - 1)
    return wishes


def aeg_trial(params, spec, seed, index, keep_transcript=False) -> TrialOutput:
    cfg = network(params, spec, seed, index)
    runner = run_aeg_session if params.get('session') else run_aeg
    outcome, transcript = runner(cfg, params['sender'], params['receiver'], params['max_repetitions'])
    values = {
        'success': int(outcome.success),
        'reason': outcome.reason,
        'repetitions': outcome.repetitions,
        'verification_rounds': outcome.verification_rounds,
        'fidelity': outcome.fidelity,
    }
    return values, transcript if keep_transcript else None


def teleport_trial(params, spec, seed, index, keep_transcript=False) -> TrialOutput:
    cfg = network(params, spec, seed, index)
    outcome, transcript = anonymous_teleport(cfg, params['sender'], params['receiver'],
                                             params.get('payload') or '+', params['max_repetitions'])
    delivered = outcome.success
    values = {
        'success': int(delivered),
        'reason': outcome.aeg.reason,
        'fidelity': outcome.fidelity,
        'pair_fidelity': outcome.pair_fidelity,
        'channel_fidelity': teleport_fidelity(outcome.payload, outcome.aeg.pair) if delivered else None,
        'bits_correct': int(outcome.decoded == outcome.measured) if delivered else None,
    }
    return values, transcript if keep_transcript else None


TRIALS = {
    'parity': parity_trial,
    'veto': veto_trial,
    'notify': notify_trial,
    'authenticate': authenticate_trial,
    'collision': collision_trial,
    'aeg': aeg_trial,
    'teleport': teleport_trial,
}
