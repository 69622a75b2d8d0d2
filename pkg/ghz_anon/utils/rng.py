# utils/rng.py
"""
Reproducible random streams.

Every stream is a counter-based Philox generator keyed by a SeedSequence built
from (seed, *stream_ids), so trial ``i`` of a plan always sees the same numbers
no matter which worker runs it or in which order.
"""

import numpy as np

RNG_FAMILY = 'numpy.random.Philox'


def rng_version() -> str:
    return f"{RNG_FAMILY}/numpy-{np.__version__}"


def make_rng(seed: int, *stream: int) -> np.random.Generator:
    """Independent generator for ``(seed, *stream)``"""
    if seed < 0:
        raise ValueError(f"Seed must be non-negative, got {seed}")
    entropy = [int(seed) & 0xFFFFFFFFFFFFFFFF] + [int(s) for s in stream]
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy)))


def trial_rng(seed: int, trial_index: int) -> np.random.Generator:
    return make_rng(seed, trial_index)
