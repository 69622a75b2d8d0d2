# adversary/noise.py
"""
Imperfect GHZ resources (1 - delta)|psi+><psi+| + delta * sigma, with sigma a
classical mixture of pure junk states orthogonal to |psi+>.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..bellcert.operator import bell_eigenstates, build_bell_operator, expectation, lattice_values
from ..quantum.register import QuantumRegister, ghz_state
from ..quantum.source import StateSource
from ..utils.errors import ConfigurationError, DomainError

logger = logging.getLogger(__name__)

ORTHOGONALITY_TOLERANCE = 1e-10
WEIGHT_TOLERANCE = 1e-9


@dataclass
class NoiseSpec:
    """
    Recipe for an imperfect resource

    Either ``delta`` is given directly, or ``target_epsilon`` is given and delta
    is solved from the junk expectation alpha via eps = delta * (n + 1 - alpha).
    """

    n: int
    junk: List[Tuple[float, QuantumRegister]] = field(default_factory=list)
    delta: Optional[float] = None
    target_epsilon: Optional[float] = None
    label: str = 'custom'

    def __post_init__(self):
        if self.delta is None and self.target_epsilon is None:
            self.delta = 0.0
        if self.delta is not None and self.target_epsilon is not None:
            raise ConfigurationError("Give either delta or target_epsilon, not both")
        self.validate()
        if self.target_epsilon is not None:
            self.delta = self._solve_delta(self.target_epsilon)

    def validate(self):
        if self.delta is not None and not 0.0 <= self.delta <= 1.0:
            raise DomainError(f"delta must lie in [0, 1], got {self.delta}")
        if self.target_epsilon is not None and self.target_epsilon < 0:
            raise DomainError(f"target epsilon must be non-negative, got {self.target_epsilon}")
        if not self.junk:
            if (self.delta or 0.0) > 0 or (self.target_epsilon or 0.0) > 0:
                raise ConfigurationError("A positive noise weight needs at least one junk state")
            return

        weights = np.array([w for w, _ in self.junk], dtype=float)
        if np.any(weights < 0) or abs(weights.sum() - 1.0) > WEIGHT_TOLERANCE:
            raise DomainError(f"Junk weights must be non-negative and sum to 1, got {weights.tolist()}")

        ideal = ghz_state(self.n, '+')
        for _, state in self.junk:
            if state.n_qubits != self.n:
                raise DomainError(f"Junk state has {state.n_qubits} qubits, expected {self.n}")
            overlap = abs(np.vdot(ideal.amplitudes, state.amplitudes))
            if overlap > ORTHOGONALITY_TOLERANCE:
                raise DomainError(f"Junk state overlaps |psi+> by {overlap:.3e}")

    @cached_property
    def alpha(self) -> float:
        """Weighted <O> over the junk states"""
        if not self.junk:
            return 0.0
        op = build_bell_operator(self.n)
        return float(sum(w * expectation(op, state) for w, state in self.junk))

    def _solve_delta(self, epsilon: float) -> float:
        if epsilon == 0:
            return 0.0
        gap = (self.n + 1) - self.alpha
        if gap <= 0:
            raise DomainError(f"Junk expectation {self.alpha:.6f} leaves no Bell deficit to realize")
        delta = epsilon / gap
        if delta > 1:
            raise DomainError(
                f"Deficit {epsilon} unreachable with this junk: needs delta={delta:.6f} > 1"
            )
        return delta

    @property
    def bell_expectation(self) -> float:
        """Exact <O> = (1 - delta)(n + 1) + delta * alpha"""
        return (1 - self.delta) * (self.n + 1) + self.delta * self.alpha

    @property
    def epsilon(self) -> float:
        return (self.n + 1) - self.bell_expectation

    def describe(self) -> dict:
        return {
            'junk': self.label,
            'delta': round(self.delta, 12),
            'alpha': round(self.alpha, 12),
            'epsilon': round(self.epsilon, 12),
        }


def minus_junk(n: int) -> List[Tuple[float, QuantumRegister]]:
    """All junk weight on |psi_n^->, alpha = -(n+1)"""
    return [(1.0, ghz_state(n, '-'))]


def eigenspace_junk(n: int, eigenvalue: int) -> List[Tuple[float, QuantumRegister]]:
    """Equal weights over an eigenspace of O, alpha = eigenvalue"""
    if eigenvalue == n + 1:
        raise DomainError("The +(n+1) eigenspace is |psi+> itself and cannot serve as junk")
    states = bell_eigenstates(n, eigenvalue)
    return [(1.0 / len(states), state) for state in states]


def parse_junk(n: int, text: str) -> List[Tuple[float, QuantumRegister]]:
    """
    Junk recipe from a short label

    Accepted labels: ``minus`` (|psi_n^->), ``eigen:<value>`` (an eigenspace of O,
    e.g. ``eigen:2``), ``lattice-top`` (eigenvalue n-3).
    """
    text = (text or 'minus').strip().lower()
    if text == 'minus':
        return minus_junk(n)
    if text == 'lattice-top':
        return eigenspace_junk(n, n - 3)
    if text.startswith('eigen:'):
        try:
            value = int(text.split(':', 1)[1])
        except ValueError:
            raise ConfigurationError(f"Invalid eigenvalue in junk label '{text}'")
        return eigenspace_junk(n, value)
    raise ConfigurationError(f"Unknown junk label '{text}' (use minus, lattice-top or eigen:<value>)")


def even_parity_probability(state: QuantumRegister) -> float:
    """Probability that the XOR of all X outcomes is 0, (1 + <X...X>)/2"""
    flipped = state.amplitudes[::-1]
    return float((1 + np.vdot(state.amplitudes, flipped).real) / 2)


class NoisySource(StateSource):
    """Samples |psi+> with probability 1 - delta, otherwise a junk state by weight"""

    def __init__(self, spec: NoiseSpec, rng: Optional[np.random.Generator] = None):
        super().__init__(spec.n, rng)
        self.spec = spec
        self._ideal = ghz_state(spec.n, '+')
        self._weights = np.array([w for w, _ in spec.junk], dtype=float)
        self._junk = [state for _, state in spec.junk]

    def _draw(self, rng: np.random.Generator) -> QuantumRegister:
        if self.spec.delta > 0 and rng.random() < self.spec.delta:
            return self._junk[int(rng.choice(len(self._junk), p=self._weights))]
        return self._ideal

    def exact_expectation(self) -> float:
        return self.spec.bell_expectation

    def exact_parity_success(self) -> float:
        """Single-round probability that Parity returns the correct (even) value"""
        junk = sum(w * even_parity_probability(s) for w, s in self.spec.junk) if self.spec.junk else 0.0
        return (1 - self.spec.delta) + self.spec.delta * junk

    def describe(self) -> dict:
        return {'type': type(self).__name__, 'n': self.n, **self.spec.describe()}


def make_noisy_source(n: int, spec: NoiseSpec, rng: Optional[np.random.Generator] = None) -> NoisySource:
    """
    Sampler for the imperfect resource described by ``spec``

    Raises:
        DomainError: if ``spec`` was built for a different n
    """
    if spec.n != n:
        raise DomainError(f"Noise spec built for n={spec.n}, requested n={n}")
    source = NoisySource(spec, rng)
    logger.debug(f"Noisy source n={n}: {spec.describe()}")
    return source


def perturbed_state(spec: NoiseSpec) -> QuantumRegister:
    """
    Pure state sqrt(1 - delta)|psi+> + sqrt(delta) * sum_i sqrt(w_i)|phi_i>

    Junk amplitudes are square roots of the weights so the state normalizes when
    the junk states are orthonormal; it is renormalized otherwise.
    """
    vector = np.sqrt(1 - spec.delta) * ghz_state(spec.n, '+').amplitudes
    for weight, state in spec.junk:
        vector = vector + np.sqrt(spec.delta * weight) * state.amplitudes
    return QuantumRegister.from_amplitudes(vector, normalize=True)


def noise_from_epsilon(n: int, epsilon: float, junk: str = 'minus') -> NoiseSpec:
    """NoiseSpec realizing a Bell deficit ``epsilon`` with the named junk"""
    return NoiseSpec(n=n, junk=parse_junk(n, junk) if epsilon > 0 else [], target_epsilon=epsilon, label=junk)


def noise_from_delta(n: int, delta: float, junk: str = 'minus') -> NoiseSpec:
    """NoiseSpec with fidelity deficit ``delta`` and the named junk"""
    return NoiseSpec(n=n, junk=parse_junk(n, junk) if delta > 0 else [], delta=delta, label=junk)


def junk_labels(n: int) -> Sequence[str]:
    """Labels accepted by ``parse_junk`` for this n"""
    return ['minus'] + [f'eigen:{v}' for v in lattice_values(n) if v != n + 1]
