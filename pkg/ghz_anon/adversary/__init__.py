from .noise import (
    NoiseSpec,
    NoisySource,
    make_noisy_source,
    perturbed_state,
    parse_junk,
    minus_junk,
    eigenspace_junk,
    even_parity_probability,
    noise_from_epsilon,
    noise_from_delta,
)
from .discrimination import GuessReport, sender_guess_attack, helstrom_success, pgm_success
from .bounds import (
    aeg_success_bound,
    aeg_success_model,
    aeg_success_series,
    parity_success_bounds,
    sender_guess_bound,
    theorem2_bound,
    theorem3_bound,
)

__all__ = [
    'NoiseSpec',
    'NoisySource',
    'make_noisy_source',
    'perturbed_state',
    'parse_junk',
    'minus_junk',
    'eigenspace_junk',
    'even_parity_probability',
    'noise_from_epsilon',
    'noise_from_delta',
    'GuessReport',
    'sender_guess_attack',
    'helstrom_success',
    'pgm_success',
    'parity_success_bounds',
    'aeg_success_bound',
    'aeg_success_series',
    'aeg_success_model',
    'sender_guess_bound',
    'theorem2_bound',
    'theorem3_bound',
]
