# adversary/discrimination.py

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Union

import numpy as np
import scipy.linalg

from .bounds import sender_guess_bound
from .noise import NoiseSpec, perturbed_state
from ..bellcert.operator import build_bell_operator, expectation
from ..quantum.register import (
    QuantumRegister,
    apply_pauli,
    fidelity,
    ghz_state,
    trace_distance_pure,
)
from ..utils.errors import DomainError

logger = logging.getLogger(__name__)

GRAM_TOLERANCE = 1e-10
MAX_ATTACK_QUBITS = 11


@dataclass
class GuessReport:
    """Success of explicit sender-identification attacks against the guessing bound"""

    n: int
    k: int
    honest_set: List[int]
    epsilon: float
    delta: float
    pgm_success: float
    bound: float
    helstrom_success: Optional[float] = None
    pairwise_trace_distances: List[List[float]] = field(default_factory=list)
    pairwise_fidelities: List[List[float]] = field(default_factory=list)
    fidelity_floor: float = 0.0
    within_bound: bool = True

    @property
    def best_attack(self) -> float:
        return max(self.pgm_success, self.helstrom_success or 0.0)

    def to_dict(self) -> dict:
        return {
            'n': self.n,
            'k': self.k,
            'honest_set': self.honest_set,
            'epsilon': round(self.epsilon, 12),
            'delta': round(self.delta, 12),
            'helstrom_success': None if self.helstrom_success is None else round(self.helstrom_success, 12),
            'pgm_success': round(self.pgm_success, 12),
            'bound': round(self.bound, 12),
            'fidelity_floor': round(self.fidelity_floor, 12),
            'pairwise_trace_distances': [[round(v, 12) for v in row] for row in self.pairwise_trace_distances],
            'within_bound': self.within_bound,
        }


def helstrom_success(a: QuantumRegister, b: QuantumRegister) -> float:
    """Optimal success for two equiprobable pure states, (1 + D)/2"""
    return 0.5 * (1 + trace_distance_pure(a, b))


def pgm_success(states: Sequence[QuantumRegister]) -> float:
    """
    Pretty-good-measurement success for equiprobable pure states

    Uses the Gram matrix G_ij = <psi_i|psi_j>: success = (1/k) sum_i [(G^1/2)_ii]^2.
    """
    k = len(states)
    if k == 0:
        raise DomainError("Need at least one state to discriminate")
    vectors = np.array([s.amplitudes for s in states])
    gram = vectors.conj() @ vectors.T

    eigenvalues, eigenvectors = scipy.linalg.eigh(gram)
    if eigenvalues.min() < -GRAM_TOLERANCE:
        raise ArithmeticError(f"Gram matrix has negative eigenvalue {eigenvalues.min():.3e}")
    eigenvalues = np.clip(eigenvalues, 0.0, None)
    root = (eigenvectors * np.sqrt(eigenvalues)) @ eigenvectors.conj().T

    return float(np.sum(np.abs(np.diag(root)) ** 2) / k)


def _as_register(n: int, noise: Union[NoiseSpec, QuantumRegister, Sequence[complex]]) -> QuantumRegister:
    if isinstance(noise, NoiseSpec):
        return perturbed_state(noise)
    if isinstance(noise, QuantumRegister):
        state = noise
    else:
        vector = np.asarray(noise, dtype=complex).reshape(-1)
        if abs(np.linalg.norm(vector) - 1.0) > 1e-10:
            raise DomainError(f"Attack input is not normalized (norm {np.linalg.norm(vector):.12f})")
        state = QuantumRegister.from_amplitudes(vector, normalize=True)
    if state.n_qubits != n:
        raise DomainError(f"Attack state has {state.n_qubits} qubits, expected {n}")
    return state


def sender_guess_attack(n: int, noise: Union[NoiseSpec, QuantumRegister, Sequence[complex]],
                        honest_set: Sequence[int]) -> GuessReport:
    """
    Discriminate the states Z_i|psi> for candidate senders i in ``honest_set``

    The adversary holds the full global state. The pretty-good measurement is
    computed for every k, the Helstrom measurement additionally for k = 2; both
    are compared with 1/k + sqrt(eps), eps = (n+1) - <O> on |psi>.

    Args:
        n: Number of agents
        noise: NoiseSpec (converted to its pure perturbed state) or a pure state
        honest_set: Candidate sender indices, 2 <= k <= n
    """
    honest = sorted(int(i) for i in honest_set)
    k = len(honest)
    if not 2 <= k <= n:
        raise DomainError(f"Honest set size must lie in [2, {n}], got {k}")
    if len(set(honest)) != k or honest[0] < 1 or honest[-1] > n:
        raise DomainError(f"Honest set {honest} must hold distinct agents in 1..{n}")
    if n > MAX_ATTACK_QUBITS:
        raise DomainError(f"Attack simulation limited to n <= {MAX_ATTACK_QUBITS}, got n={n}")

    state = _as_register(n, noise)
    epsilon = max(0.0, (n + 1) - expectation(build_bell_operator(n), state))
    delta = 1 - fidelity(state, ghz_state(n, '+')) ** 2

    candidates = [apply_pauli(state, i, 'Z') for i in honest]
    fidelities = [[fidelity(a, b) for b in candidates] for a in candidates]
    distances = [[trace_distance_pure(a, b) for b in candidates] for a in candidates]

    pgm = pgm_success(candidates)
    helstrom = helstrom_success(candidates[0], candidates[1]) if k == 2 else None
    bound = sender_guess_bound(k, epsilon)

    best = max(pgm, helstrom or 0.0)
    within = best <= bound + GRAM_TOLERANCE
    if not within:
        logger.warning(f"Attack success {best:.6f} exceeds guessing bound {bound:.6f} (n={n}, k={k})")

    report = GuessReport(
        n=n,
        k=k,
        honest_set=honest,
        epsilon=epsilon,
        delta=delta,
        pgm_success=pgm,
        bound=bound,
        helstrom_success=helstrom,
        pairwise_trace_distances=distances,
        pairwise_fidelities=fidelities,
        fidelity_floor=1 - 2 * delta,
        within_bound=within,
    )
    logger.info(
        f"Sender guess n={n} k={k} eps={epsilon:.6f}: pgm={pgm:.6f}"
        + (f" helstrom={helstrom:.6f}" if helstrom is not None else '')
        + f" bound={bound:.6f}"
    )
    return report
