# harness/models.py
"""Analytic predictions the Monte Carlo estimates are compared with."""

from typing import Dict, Mapping, Optional

import numpy as np

from ..utils.errors import DomainError


def veto_model(S: int, any_input: bool, parity_success: float = 1.0) -> float:
    """
    Pr[V = 1] for the logical OR

    With an active input each round's parity is a fair coin; with all inputs 0
    V = 1 only through parity errors.
    """
    if any_input:
        return 1 - 2.0 ** -S
    return 1 - parity_success ** S


def notify_false_positive_model(n: int, S: int, parity_success: float = 1.0) -> float:
    """Pr[some agent other than the receiver believes it is the receiver]"""
    return 1 - parity_success ** (S * (n - 1))


def replay_mismatch_probability(n: int, parity_success: float) -> float:
    """
    Per-round mismatch probability of the authentication replay

    The replayed parity carries n independent parity errors (n - 1 notification
    rounds and the replay round); it mismatches when an odd number occur.
    """
    return (1 - (2 * parity_success - 1) ** n) / 2


def authentication_abort_model(n: int, S: int, tolerance: int, parity_success: float = 1.0,
                               tamper: Optional[Mapping[int, int]] = None) -> float:
    """
    Pr[mismatches > tolerance] for independent per-round mismatches

    Rounds hit by an odd number of tampered inputs mismatch with the complementary
    probability.
    """
    p = replay_mismatch_probability(n, parity_success)
    flips = np.zeros(S, dtype=int)
    for _, t in (tamper or {}).items():
        flips[t - 1] ^= 1
    per_round = np.where(flips == 1, 1 - p, p)

    # distribution of the mismatch count, one round at a time
    counts = np.zeros(S + 1)
    counts[0] = 1.0
    for q in per_round:
        counts[1:] = counts[1:] * (1 - q) + counts[:-1] * q
        counts[0] *= (1 - q)
    return float(counts[tolerance + 1:].sum())


def collision_model(wishers: int, S: int) -> Dict[int, float]:
    """
    Distribution of the collision-detection output on an ideal source

    With m >= 2 wishers Veto A fires with 1 - 2^-S. For odd m it can fire while
    nobody detects, exactly when every wisher fed the same bit in every round.
    """
    if wishers < 0:
        raise DomainError(f"Wisher count must be non-negative, got {wishers}")
    coin = 2.0 ** -S
    if wishers == 0:
        return {0: 1.0, 1: 0.0, 2: 0.0}
    if wishers == 1:
        return {0: coin, 1: 1 - coin, 2: 0.0}

    fired = 1 - coin
    undetected = (2.0 ** (S * (1 - wishers)) - 2.0 ** (-wishers * S)) if wishers % 2 else 0.0
    collision = (fired - undetected) * (1 - coin)
    return {0: coin, 1: fired - collision, 2: collision}


def expected_collision_output(wishers: int) -> int:
    return min(wishers, 2)
