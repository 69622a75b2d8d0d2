# bellcert/operator.py
"""
Bell-type operator O = O_0 - sum_i O_i for odd n.

O_0 is X on every qubit; O_i carries Y on qubits i and i+1 (cyclic, so O_n
pairs qubits n and 1) and X elsewhere. All n+1 terms commute, and
O = O_0 (1 + sum_i Z_i Z_{i+1}), which is what ``bell_eigenstates`` builds on.
"""

import logging
from dataclasses import dataclass, field
from functools import reduce
from itertools import product
from typing import Dict, List, Tuple

import numpy as np
import scipy.linalg

from ..quantum.register import (
    PAULI_MATRICES,
    QuantumRegister,
    apply_paulis,
    fidelity,
    ghz_state,
)
from ..utils.errors import DomainError

logger = logging.getLogger(__name__)

IMAGINARY_TOLERANCE = 1e-10
EIGEN_TOLERANCE = 1e-9
MAX_SPECTRUM_QUBITS = 11
MAX_LR_QUBITS = 9


def _check_odd(n: int):
    if n < 3 or n % 2 == 0:
        raise DomainError(f"The Bell operator is defined for odd n >= 3, got n={n}")


@dataclass(frozen=True)
class PauliString:
    """Signed tensor product of single-qubit Paulis"""

    letters: Tuple[str, ...]
    sign: int = 1

    def __post_init__(self):
        letters = tuple(letter.upper() for letter in self.letters)
        if any(letter not in PAULI_MATRICES for letter in letters):
            raise DomainError(f"Invalid Pauli letters {self.letters}")
        if self.sign not in (1, -1):
            raise DomainError(f"Pauli string sign must be +1 or -1, got {self.sign}")
        object.__setattr__(self, 'letters', letters)

    @classmethod
    def parse(cls, label: str) -> 'PauliString':
        """Parse labels such as '+XXX' or '-YYX'"""
        sign = -1 if label.startswith('-') else 1
        return cls(tuple(label.lstrip('+-')), sign)

    @property
    def n_qubits(self) -> int:
        return len(self.letters)

    def apply(self, reg: QuantumRegister) -> QuantumRegister:
        """Apply the unsigned Pauli product to ``reg``"""
        if reg.n_qubits != self.n_qubits:
            raise DomainError(f"Pauli string of length {self.n_qubits} applied to {reg.n_qubits} qubits")
        return apply_paulis(reg, {q: letter for q, letter in enumerate(self.letters, start=1)})

    def expectation(self, reg: QuantumRegister) -> float:
        """Signed expectation value <reg| sign * P |reg>"""
        value = np.vdot(reg.amplitudes, self.apply(reg).amplitudes)
        if abs(value.imag) > IMAGINARY_TOLERANCE:
            raise ArithmeticError(f"Pauli expectation has imaginary part {value.imag:.3e}")
        return self.sign * float(value.real)

    def matrix(self) -> np.ndarray:
        return self.sign * reduce(np.kron, (PAULI_MATRICES[letter] for letter in self.letters))

    def __str__(self) -> str:
        return f"{'+' if self.sign > 0 else '-'}{''.join(self.letters)}"


@dataclass(frozen=True)
class BellOperator:
    """The n+1 signed terms of O; term 0 is all-X"""

    n: int
    terms: Tuple[PauliString, ...]

    def __post_init__(self):
        if len(self.terms) != self.n + 1:
            raise DomainError(f"Bell operator on {self.n} qubits needs {self.n + 1} terms, got {len(self.terms)}")

    @property
    def labels(self) -> List[str]:
        return [str(term) for term in self.terms]

    def measurement_bases(self, term_index: int) -> Tuple[str, ...]:
        """Local basis per qubit for measuring one term"""
        return self.terms[term_index].letters


@dataclass
class SpectrumReport:
    n: int
    eigenvalues: Tuple[float, ...]
    multiplicities: Dict[int, int]
    extremal_nondegenerate: bool
    extremal_eigenvector_fidelity_to_ghz: float
    on_lattice: bool = True
    off_lattice: List[float] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            'n': self.n,
            'multiplicities': {str(k): v for k, v in sorted(self.multiplicities.items(), reverse=True)},
            'extremal_nondegenerate': self.extremal_nondegenerate,
            'extremal_eigenvector_fidelity_to_ghz': round(self.extremal_eigenvector_fidelity_to_ghz, 12),
            'on_lattice': self.on_lattice,
            'off_lattice': [round(v, 12) for v in self.off_lattice],
        }


def build_bell_operator(n: int) -> BellOperator:
    """
    Build O for odd n

    Term i (1 <= i <= n) has Y at qubits i and i+1, wrapping so that term n
    pairs qubits n and 1.
    """
    _check_odd(n)
    terms = [PauliString(tuple('X' * n), 1)]
    for i in range(1, n + 1):
        letters = ['X'] * n
        letters[i - 1] = 'Y'
        letters[i % n] = 'Y'
        terms.append(PauliString(tuple(letters), -1))
    return BellOperator(n, tuple(terms))


def term_expectations(op: BellOperator, reg: QuantumRegister) -> List[float]:
    """Signed expectation of each term"""
    if reg.n_qubits != op.n:
        raise DomainError(f"Operator on {op.n} qubits cannot act on a {reg.n_qubits}-qubit register")
    return [term.expectation(reg) for term in op.terms]


def expectation(op: BellOperator, reg: QuantumRegister) -> float:
    """Exact <reg|O|reg>"""
    return float(sum(term_expectations(op, reg)))


def operator_matrix(op: BellOperator) -> np.ndarray:
    """Dense 2^n x 2^n Hermitian matrix of O"""
    return sum(term.matrix() for term in op.terms)


def lattice_values(n: int) -> List[int]:
    """Allowed eigenvalues +/-[(n+1) - 4k]"""
    values = set()
    for k in range((n + 1) // 4 + 1):
        values.update({(n + 1) - 4 * k, -((n + 1) - 4 * k)})
    return sorted(values, reverse=True)


def spectrum(op: BellOperator) -> SpectrumReport:
    """
    Dense Hermitian eigendecomposition of O

    Raises:
        DomainError: if n exceeds the dense decomposition limit
    """
    n = op.n
    if n > MAX_SPECTRUM_QUBITS:
        raise DomainError(f"Dense spectrum limited to n <= {MAX_SPECTRUM_QUBITS}, got n={n}")

    matrix = operator_matrix(op)
    eigenvalues, eigenvectors = scipy.linalg.eigh(matrix)
    logger.debug(f"Computed {len(eigenvalues)} eigenvalues for n={n}")

    lattice = np.array(lattice_values(n))
    multiplicities: Dict[int, int] = {}
    off_lattice = []
    for value in eigenvalues:
        nearest = int(lattice[np.argmin(np.abs(lattice - value))])
        if abs(nearest - value) > EIGEN_TOLERANCE:
            off_lattice.append(float(value))
            logger.warning(f"Eigenvalue {value:.12f} is off the lattice for n={n}")
            continue
        multiplicities[nearest] = multiplicities.get(nearest, 0) + 1

    top, bottom = n + 1, -(n + 1)
    nondegenerate = multiplicities.get(top, 0) == 1 and multiplicities.get(bottom, 0) == 1

    top_vector = QuantumRegister.from_amplitudes(eigenvectors[:, -1], normalize=True)
    bottom_vector = QuantumRegister.from_amplitudes(eigenvectors[:, 0], normalize=True)
    ghz_fidelity = min(
        fidelity(top_vector, ghz_state(n, '+')),
        fidelity(bottom_vector, ghz_state(n, '-')),
    )

    return SpectrumReport(
        n=n,
        eigenvalues=tuple(float(v) for v in eigenvalues),
        multiplicities=multiplicities,
        extremal_nondegenerate=nondegenerate,
        extremal_eigenvector_fidelity_to_ghz=ghz_fidelity,
        on_lattice=not off_lattice,
        off_lattice=off_lattice,
    )


def lr_max(n: int) -> Tuple[int, Tuple[Tuple[int, int], ...]]:
    """
    Maximum of O over deterministic local-realistic assignments

    Every agent i holds a value x_i for X and y_i for Y. The value of O is
    prod(x) - sum_i prod_{j != i, i+1} x_j * y_i * y_{i+1}, enumerated over all
    2^(2n) assignments.

    Returns:
        The maximum and one maximizing assignment as (x_i, y_i) pairs
    """
    _check_odd(n)
    if n > MAX_LR_QUBITS:
        raise DomainError(f"Local-realistic enumeration limited to n <= {MAX_LR_QUBITS}, got n={n}")

    signs = np.array(list(product((1, -1), repeat=n)), dtype=np.int64)
    x = signs[:, None, :]
    y = signs[None, :, :]
    products = np.prod(signs, axis=1)[:, None]

    # prod_{j != i, i+1} x_j == prod(x) * x_i * x_{i+1}
    w = x * y
    ring = np.sum(w * np.roll(w, -1, axis=2), axis=2)
    values = products * (1 - ring)

    flat = int(np.argmax(values))
    xi, yi = np.unravel_index(flat, values.shape)
    best = int(values[xi, yi])
    witness = tuple((int(a), int(b)) for a, b in zip(signs[xi], signs[yi]))
    logger.debug(f"LR maximum for n={n}: {best} at {witness}")
    return best, witness


def bell_eigenstates(n: int, eigenvalue: int) -> List[QuantumRegister]:
    """
    Orthonormal eigenvectors of O for one lattice eigenvalue

    Eigenvectors are (|z> + s|~z>)/sqrt(2) where ~z is the complement of z and
    z has f anti-correlated neighbouring pairs on the ring; the eigenvalue is
    s * (n + 1 - 2f).

    Raises:
        DomainError: if the eigenvalue is not in the spectrum
    """
    _check_odd(n)
    states = []
    for s in (1, -1):
        doubled = (n + 1) - s * eigenvalue
        if doubled % 2:
            continue
        walls = doubled // 2
        if walls < 0 or walls > n or walls % 2:
            continue
        for tail in product((0, 1), repeat=n - 1):
            z = (0,) + tail
            if sum(z[i] ^ z[(i + 1) % n] for i in range(n)) != walls:
                continue
            index = int(''.join(map(str, z)), 2)
            amplitudes = np.zeros(2 ** n, dtype=complex)
            amplitudes[index] = 1 / np.sqrt(2)
            amplitudes[(2 ** n - 1) ^ index] = s / np.sqrt(2)
            states.append(QuantumRegister(n, amplitudes))

    if not states:
        raise DomainError(f"{eigenvalue} is not an eigenvalue of the n={n} Bell operator")
    return states
