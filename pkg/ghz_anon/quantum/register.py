# quantum/register.py
"""
Dense pure-state simulator for small multi-qubit registers.

Basis ordering: qubit 1 is the most significant bit of the amplitude index, so
reshaping the amplitude vector to ``[2] * n`` puts qubit ``q`` on axis ``q - 1``.
Qubits are numbered from 1 to match agent numbering in the protocols.

Measurement outcomes are reported as bits: eigenvalue +1 -> 0, eigenvalue -1 -> 1.
Mixed resources are never stored; they are sampled as classical mixtures of pure
registers upstream.
"""

import logging
from dataclasses import dataclass
from itertools import product
from typing import Dict, Iterable, Mapping, Sequence, Tuple

import numpy as np

from ..utils.errors import DomainError

logger = logging.getLogger(__name__)

NORM_TOLERANCE = 1e-12
BORN_TOLERANCE = 1e-9
MAX_QUBITS = 14

_SQRT2_INV = 1 / np.sqrt(2)

PAULI_MATRICES = {
    'I': np.eye(2, dtype=complex),
    'X': np.array([[0, 1], [1, 0]], dtype=complex),
    'Y': np.array([[0, -1j], [1j, 0]], dtype=complex),
    'Z': np.array([[1, 0], [0, -1]], dtype=complex),
}

# Rows are the eigenvectors for outcome bit 0 (+1) and bit 1 (-1).
BASIS_EIGENVECTORS = {
    'X': np.array([[1, 1], [1, -1]], dtype=complex) * _SQRT2_INV,
    'Y': np.array([[1, 1j], [1, -1j]], dtype=complex) * _SQRT2_INV,
    'Z': np.eye(2, dtype=complex),
}


@dataclass(frozen=True, eq=False)
class QuantumRegister:
    """Pure state of ``n_qubits`` qubits held as 2**n complex amplitudes"""

    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.n_qubits < 2 or self.n_qubits > MAX_QUBITS:
            raise DomainError(f"Register size must be between 2 and {MAX_QUBITS} qubits, got {self.n_qubits}")

        amplitudes = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amplitudes.size != 2 ** self.n_qubits:
            raise DomainError(
                f"Expected {2 ** self.n_qubits} amplitudes for {self.n_qubits} qubits, got {amplitudes.size}"
            )

        norm = float(np.vdot(amplitudes, amplitudes).real)
        if abs(norm - 1.0) > NORM_TOLERANCE:
            raise DomainError(f"Amplitudes are not normalized (squared norm {norm:.15f})")

        amplitudes.setflags(write=False)
        object.__setattr__(self, 'amplitudes', amplitudes)

    @classmethod
    def from_amplitudes(cls, amplitudes: Sequence[complex], normalize: bool = False) -> 'QuantumRegister':
        """Build a register from a raw amplitude vector, optionally renormalizing it"""
        vector = np.array(amplitudes, dtype=complex).reshape(-1)
        n_qubits = int(round(np.log2(vector.size))) if vector.size else 0
        if vector.size == 0 or 2 ** n_qubits != vector.size:
            raise DomainError(f"Amplitude vector length {vector.size} is not a power of two")
        if normalize:
            norm = np.linalg.norm(vector)
            if norm == 0:
                raise DomainError("Cannot normalize the zero vector")
            vector = vector / norm
        return cls(n_qubits, vector)

    @property
    def dimension(self) -> int:
        return 2 ** self.n_qubits

    def tensor(self) -> np.ndarray:
        """Writable copy of the amplitudes shaped ``[2] * n``"""
        return np.array(self.amplitudes).reshape([2] * self.n_qubits)

    def allclose(self, other: 'QuantumRegister', tol: float = NORM_TOLERANCE) -> bool:
        """Amplitude-wise equality (no global phase freedom)"""
        return self.n_qubits == other.n_qubits and bool(
            np.allclose(self.amplitudes, other.amplitudes, atol=tol, rtol=0)
        )

    def __repr__(self) -> str:
        support = {
            format(i, f'0{self.n_qubits}b'): complex(np.round(a, 6))
            for i, a in enumerate(self.amplitudes) if abs(a) > 1e-9
        }
        return f"QuantumRegister(n_qubits={self.n_qubits}, support={support})"


@dataclass(frozen=True)
class MeasurementOutcome:
    """Bits obtained on a set of qubits; bit 0 encodes eigenvalue +1"""

    qubits: Tuple[int, ...]
    bits: Tuple[int, ...]

    @property
    def parity(self) -> int:
        return int(np.bitwise_xor.reduce(self.bits)) if self.bits else 0

    @property
    def values(self) -> Tuple[int, ...]:
        """Outcomes as +1 / -1"""
        return tuple(1 - 2 * b for b in self.bits)

    def bit_for(self, qubit: int) -> int:
        return self.bits[self.qubits.index(qubit)]


def _check_qubit(reg: QuantumRegister, qubit: int):
    if not 1 <= qubit <= reg.n_qubits:
        raise DomainError(f"Qubit index {qubit} out of range 1..{reg.n_qubits}")


def _check_qubits(reg: QuantumRegister, qubits: Iterable[int]) -> Tuple[int, ...]:
    qubits = tuple(int(q) for q in qubits)
    if not qubits:
        raise DomainError("At least one qubit must be measured")
    if len(set(qubits)) != len(qubits):
        raise DomainError(f"Qubit indices must be distinct, got {qubits}")
    for q in qubits:
        _check_qubit(reg, q)
    return qubits


def _check_basis(basis: str) -> str:
    basis = basis.upper()
    if basis not in BASIS_EIGENVECTORS:
        raise DomainError(f"Unsupported measurement basis '{basis}', expected X, Y or Z")
    return basis


def _apply_matrix(tensor: np.ndarray, matrix: np.ndarray, axis: int) -> np.ndarray:
    """Apply a 2x2 matrix to one axis of a ``[2] * n`` tensor"""
    moved = np.tensordot(matrix, tensor, axes=([1], [axis]))
    return np.moveaxis(moved, 0, axis)


def ghz_state(n: int, sign: str = '+') -> QuantumRegister:
    """
    GHZ state (|0...0> +/- |1...1>)/sqrt(2) on an odd number of qubits

    Args:
        n: Number of qubits (odd, at least 3)
        sign: '+' or '-'

    Raises:
        DomainError: if n is even or smaller than 3
    """
    if n < 3 or n % 2 == 0:
        raise DomainError(f"GHZ resources are restricted to odd n >= 3, got n={n}")
    if sign not in ('+', '-'):
        raise DomainError(f"GHZ sign must be '+' or '-', got '{sign}'")

    amplitudes = np.zeros(2 ** n, dtype=complex)
    amplitudes[0] = _SQRT2_INV
    amplitudes[-1] = _SQRT2_INV if sign == '+' else -_SQRT2_INV
    return QuantumRegister(n, amplitudes)


def computational_state(bits: Sequence[int]) -> QuantumRegister:
    """Product state |b1 b2 ... bn>"""
    bits = [int(b) for b in bits]
    if any(b not in (0, 1) for b in bits):
        raise DomainError(f"Computational basis labels must be bits, got {bits}")
    amplitudes = np.zeros(2 ** len(bits), dtype=complex)
    amplitudes[int(''.join(map(str, bits)), 2)] = 1.0
    return QuantumRegister(len(bits), amplitudes)


def bell_pair() -> QuantumRegister:
    """EPR pair (|00> + |11>)/sqrt(2)"""
    return QuantumRegister(2, np.array([_SQRT2_INV, 0, 0, _SQRT2_INV], dtype=complex))


def apply_pauli(reg: QuantumRegister, qubit: int, letter: str) -> QuantumRegister:
    """
    Apply a single-qubit Pauli and return the new register

    Args:
        reg: Input register (left untouched)
        qubit: 1-based qubit index
        letter: One of I, X, Y, Z
    """
    _check_qubit(reg, qubit)
    letter = letter.upper()
    if letter not in PAULI_MATRICES:
        raise DomainError(f"Unknown Pauli letter '{letter}'")
    if letter == 'I':
        return reg

    tensor = _apply_matrix(reg.tensor(), PAULI_MATRICES[letter], qubit - 1)
    return QuantumRegister(reg.n_qubits, tensor.reshape(-1))


def apply_paulis(reg: QuantumRegister, letters: Mapping[int, str]) -> QuantumRegister:
    """Apply several single-qubit Paulis given as ``{qubit: letter}``"""
    tensor = reg.tensor()
    for qubit, letter in letters.items():
        _check_qubit(reg, qubit)
        if letter.upper() != 'I':
            tensor = _apply_matrix(tensor, PAULI_MATRICES[letter.upper()], qubit - 1)
    return QuantumRegister(reg.n_qubits, tensor.reshape(-1))


def _rotated_tensor(reg: QuantumRegister, qubits: Tuple[int, ...], bases: Sequence[str]) -> np.ndarray:
    """Amplitudes expressed in the eigenbasis of each measured qubit"""
    tensor = reg.tensor()
    for qubit, basis in zip(qubits, bases):
        tensor = _apply_matrix(tensor, BASIS_EIGENVECTORS[basis].conj(), qubit - 1)
    return tensor


def _marginal(tensor: np.ndarray, qubits: Tuple[int, ...]) -> np.ndarray:
    """Joint outcome probabilities of ``qubits`` in the order given"""
    n = tensor.ndim
    axes = [q - 1 for q in qubits]
    others = tuple(a for a in range(n) if a not in axes)
    probs = np.sum(np.abs(tensor) ** 2, axis=others) if others else np.abs(tensor) ** 2
    # remaining axes are sorted; reorder to the requested qubit order
    order = sorted(axes)
    return np.transpose(probs, [order.index(a) for a in axes])


def _normalize_bases(qubits: Tuple[int, ...], basis) -> Tuple[str, ...]:
    if isinstance(basis, str):
        return tuple(_check_basis(basis) for _ in qubits)
    bases = tuple(_check_basis(b) for b in basis)
    if len(bases) != len(qubits):
        raise DomainError(f"Got {len(bases)} bases for {len(qubits)} qubits")
    return bases


def outcome_distribution(reg: QuantumRegister, qubits: Iterable[int], basis) -> Dict[Tuple[int, ...], float]:
    """
    Exact Born distribution of the joint outcome on ``qubits``

    Args:
        reg: Register to measure
        qubits: Qubits to measure, outcome bits follow this order
        basis: A single basis letter for all qubits or one letter per qubit

    Returns:
        Mapping from every bit tuple to its probability (zeros included)
    """
    qubits = _check_qubits(reg, qubits)
    bases = _normalize_bases(qubits, basis)
    probs = _marginal(_rotated_tensor(reg, qubits, bases), qubits)
    return {bits: float(probs[bits]) for bits in product((0, 1), repeat=len(qubits))}


def measure_basis(reg: QuantumRegister, qubits: Iterable[int], basis,
                  rng: np.random.Generator) -> Tuple[MeasurementOutcome, QuantumRegister]:
    """
    Measure ``qubits`` in the X or Y basis and collapse the register

    Args:
        reg: Register to measure (left untouched)
        qubits: Distinct 1-based qubit indices
        basis: 'X', 'Y' (or 'Z'), or one letter per qubit
        rng: Random stream used to sample the Born distribution

    Returns:
        The outcome restricted to ``qubits`` and the renormalized post-measurement
        register on all n qubits
    """
    qubits = _check_qubits(reg, qubits)
    bases = _normalize_bases(qubits, basis)
    rotated = _rotated_tensor(reg, qubits, bases)
    probs = _marginal(rotated, qubits).reshape(-1)
    probs = np.clip(probs, 0.0, None)
    total = probs.sum()
    if abs(total - 1.0) > BORN_TOLERANCE:
        logger.warning(f"Born probabilities sum to {total:.12f}, renormalizing")

    index = int(rng.choice(probs.size, p=probs / total))
    bits = tuple(int(b) for b in format(index, f'0{len(qubits)}b'))

    selector = [slice(None)] * reg.n_qubits
    for qubit, bit in zip(qubits, bits):
        selector[qubit - 1] = bit
    collapsed = np.zeros_like(rotated)
    collapsed[tuple(selector)] = rotated[tuple(selector)]
    collapsed = collapsed / np.sqrt(probs[index])

    # back to the computational frame: measured qubits sit in the outcome eigenstate
    for qubit, basis_letter in zip(qubits, bases):
        collapsed = _apply_matrix(collapsed, BASIS_EIGENVECTORS[basis_letter].T, qubit - 1)

    post = QuantumRegister.from_amplitudes(collapsed.reshape(-1), normalize=True)
    return MeasurementOutcome(qubits, bits), post


def project_out(reg: QuantumRegister, qubits: Iterable[int], basis,
                bits: Sequence[int]) -> QuantumRegister:
    """
    State of the unmeasured qubits after ``qubits`` gave ``bits``

    The remaining qubits keep their relative order (ascending index).

    Raises:
        DomainError: if the outcome has zero probability or fewer than two qubits remain
    """
    qubits = _check_qubits(reg, qubits)
    bases = _normalize_bases(qubits, basis)
    if len(bits) != len(qubits):
        raise DomainError(f"Got {len(bits)} outcome bits for {len(qubits)} qubits")

    tensor = reg.tensor()
    # contract from the highest axis down so lower axis numbers stay valid
    for qubit, basis_letter, bit in sorted(zip(qubits, bases, bits), reverse=True):
        bra = BASIS_EIGENVECTORS[basis_letter][int(bit)].conj()
        tensor = np.tensordot(tensor, bra, axes=([qubit - 1], [0]))

    remaining = tensor.reshape(-1)
    norm = np.linalg.norm(remaining)
    if norm < BORN_TOLERANCE:
        raise DomainError(f"Outcome {tuple(bits)} on qubits {qubits} has zero probability")
    return QuantumRegister.from_amplitudes(remaining / norm)


def fidelity(a: QuantumRegister, b: QuantumRegister) -> float:
    """|<a|b>| for two pure registers"""
    if a.n_qubits != b.n_qubits:
        raise DomainError(f"Dimension mismatch: {a.n_qubits} vs {b.n_qubits} qubits")
    return float(min(1.0, abs(np.vdot(a.amplitudes, b.amplitudes))))


def trace_distance_pure(a: QuantumRegister, b: QuantumRegister) -> float:
    """Trace distance of two pure states, sqrt(1 - F^2)"""
    f = fidelity(a, b)
    return float(np.sqrt(max(0.0, 1.0 - f * f)))


def sample_outcome(reg: QuantumRegister, qubits: Iterable[int], basis,
                   rng: np.random.Generator) -> MeasurementOutcome:
    """Sample a joint outcome without building the post-measurement register"""
    qubits = _check_qubits(reg, qubits)
    bases = _normalize_bases(qubits, basis)
    probs = np.clip(_marginal(_rotated_tensor(reg, qubits, bases), qubits).reshape(-1), 0.0, None)
    index = int(rng.choice(probs.size, p=probs / probs.sum()))
    return MeasurementOutcome(qubits, tuple(int(b) for b in format(index, f'0{len(qubits)}b')))
