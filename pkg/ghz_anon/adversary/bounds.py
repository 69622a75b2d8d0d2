# adversary/bounds.py
"""Closed-form security bounds for imperfect resources with Bell deficit epsilon."""

import logging
import math
from typing import Tuple

from ..utils.errors import DomainError

logger = logging.getLogger(__name__)


def _check_epsilon(epsilon: float):
    if epsilon < 0:
        raise DomainError(f"Bell deficit must be non-negative, got {epsilon}")


def parity_success_bounds(n: int, epsilon: float) -> Tuple[float, float]:
    """(1 - eps/4, 1 - eps/(4(n-1))) for the single-round Parity success probability"""
    _check_epsilon(epsilon)
    return 1 - epsilon / 4, 1 - epsilon / (4 * (n - 1))


def aeg_success_bound(n: int, S: int, epsilon: float) -> float:
    """
    Upper bound on the probability that entanglement generation does not abort

        2^-S q^(S-1) / (1 - (1 - 2^-S) q^2),   q = 1 - eps/(4(n-1))
    """
    _check_epsilon(epsilon)
    if S < 1:
        raise DomainError(f"Security parameter must be at least 1, got {S}")

    q = 1 - epsilon / (4 * (n - 1))
    coin = 2.0 ** -S
    denominator = 1 - (1 - coin) * q * q
    if denominator <= 0:
        raise ArithmeticError(f"Non-positive denominator {denominator} for n={n}, S={S}, eps={epsilon}")
    return coin * q ** (S - 1) / denominator


def aeg_success_series(S: int, parity_success: float) -> float:
    """
    Sum over repetitions l >= 0 of 2^-S (1 - 2^-S)^l p^(S + 2l - 1)

    With p set to the upper Parity bound this reproduces ``aeg_success_bound``.
    """
    if not 0 <= parity_success <= 1:
        raise DomainError(f"Parity success must be a probability, got {parity_success}")
    coin = 2.0 ** -S
    return coin * parity_success ** (S - 1) / (1 - (1 - coin) * parity_success ** 2)


def sender_guess_bound(k: int, epsilon: float) -> float:
    """1/k + sqrt(eps), clamped to 1"""
    _check_epsilon(epsilon)
    if k < 1:
        raise DomainError(f"Honest-agent count must be at least 1, got {k}")
    return min(1.0, 1.0 / k + math.sqrt(epsilon))


def aeg_success_model(S: int, parity_success: float) -> float:
    """
    Exact non-abort probability of the generation loop on a source with
    single-round Parity success p

    Every verification repetition passes with p^2 (mode round and check), the
    final entanglement repetition with p^2 (mode round and abort-flag round):

        2^-S p^2 / (1 - (1 - 2^-S) p^2)
    """
    if not 0 <= parity_success <= 1:
        raise DomainError(f"Parity success must be a probability, got {parity_success}")
    if S < 1:
        raise DomainError(f"Security parameter must be at least 1, got {S}")
    coin = 2.0 ** -S
    p2 = parity_success ** 2
    return coin * p2 / (1 - (1 - coin) * p2)


# aliases under the operation names
theorem2_bound = aeg_success_bound
theorem3_bound = sender_guess_bound
