# quantum/source.py

import logging
from collections import deque
from typing import Iterable, Optional

import numpy as np

from .register import QuantumRegister, ghz_state
from ..utils.errors import DomainError, SourceExhaustedError


class StateSource:
    """Hands out one fresh n-qubit copy per draw"""

    def __init__(self, n: int, rng: Optional[np.random.Generator] = None):
        self.logger = logging.getLogger(__name__)
        self.n = n
        self.rng = rng
        self.copies_drawn = 0

    def draw(self, rng: Optional[np.random.Generator] = None) -> QuantumRegister:
        rng = rng if rng is not None else self.rng
        if rng is None:
            raise DomainError(f"{type(self).__name__} needs a random stream to draw from")
        state = self._draw(rng)
        if state.n_qubits != self.n:
            raise DomainError(f"Source produced a {state.n_qubits}-qubit state, expected {self.n}")
        self.copies_drawn += 1
        return state

    def _draw(self, rng: np.random.Generator) -> QuantumRegister:
        raise NotImplementedError

    def exact_expectation(self) -> Optional[float]:
        """Exact <O> of the emitted mixture when the source knows it"""
        return None

    def describe(self) -> dict:
        return {'type': type(self).__name__, 'n': self.n}


class IdealGHZSource(StateSource):
    """Emits |psi_n^+> on every draw"""

    def __init__(self, n: int):
        super().__init__(n)
        self._state = ghz_state(n, '+')

    def _draw(self, rng: np.random.Generator) -> QuantumRegister:
        return self._state

    def exact_expectation(self) -> float:
        return float(self.n + 1)


class FixedStateSource(StateSource):
    """Emits the same (possibly non-GHZ) register on every draw"""

    def __init__(self, state: QuantumRegister):
        super().__init__(state.n_qubits)
        self._state = state

    def _draw(self, rng: np.random.Generator) -> QuantumRegister:
        return self._state


class QueueSource(StateSource):
    """Finite source replaying a fixed list of copies"""

    def __init__(self, n: int, states: Iterable[QuantumRegister]):
        super().__init__(n)
        self._queue = deque(states)

    @property
    def remaining(self) -> int:
        return len(self._queue)

    def _draw(self, rng: np.random.Generator) -> QuantumRegister:
        if not self._queue:
            raise SourceExhaustedError(f"Source exhausted after {self.copies_drawn} copies")
        return self._queue.popleft()
