# protocols/network.py

from dataclasses import dataclass, field
from typing import NewType, Optional, Sequence, Tuple

import numpy as np

from ..quantum.source import IdealGHZSource, StateSource
from ..utils.errors import ConfigurationError, DomainError
from ..utils.rng import make_rng

AgentId = NewType('AgentId', int)


@dataclass
class NetworkConfig:
    """
    Shared settings of one protocol execution

    Args:
        n: Number of agents (odd, at least 3)
        S: Security parameter, number of copies / coins per stage
        source: State sampler; an ideal GHZ source is used when omitted
        rng_seed: Seed of the execution's random stream
        rng: Explicit random stream, overrides ``rng_seed``
        auth_tolerance: Mismatches tolerated by receiver authentication
        verification_tolerance: Fraction of failed verification rounds tolerated
    """

    n: int
    S: int = 1
    source: Optional[StateSource] = None
    rng_seed: int = 0
    rng: Optional[np.random.Generator] = field(default=None, repr=False)
    auth_tolerance: int = 0
    verification_tolerance: float = 0.0

    def __post_init__(self):
        if self.n < 3 or self.n % 2 == 0:
            raise DomainError(f"Networks are restricted to odd n >= 3, got n={self.n}")
        if self.S < 1:
            raise ConfigurationError(f"Security parameter S must be at least 1, got {self.S}")
        if self.auth_tolerance < 0:
            raise ConfigurationError(f"Authentication tolerance must be non-negative, got {self.auth_tolerance}")
        if not 0.0 <= self.verification_tolerance < 1.0:
            raise ConfigurationError(
                f"Verification tolerance must lie in [0, 1), got {self.verification_tolerance}"
            )
        if self.source is None:
            self.source = IdealGHZSource(self.n)
        if self.source.n != self.n:
            raise DomainError(f"Source emits {self.source.n}-qubit states for an n={self.n} network")
        if self.rng is None:
            self.rng = make_rng(self.rng_seed)

    @property
    def agents(self) -> Tuple[AgentId, ...]:
        return tuple(AgentId(i) for i in range(1, self.n + 1))

    def check_agent(self, agent: int) -> AgentId:
        if not 1 <= int(agent) <= self.n:
            raise DomainError(f"Agent {agent} is not part of the {self.n}-agent network")
        return AgentId(int(agent))

    def check_bits(self, bits: Sequence[int], what: str = 'inputs') -> Tuple[int, ...]:
        bits = tuple(int(b) for b in bits)
        if len(bits) != self.n:
            raise DomainError(f"Expected {self.n} {what}, got {len(bits)}")
        if any(b not in (0, 1) for b in bits):
            raise DomainError(f"{what.capitalize()} must be bits, got {bits}")
        return bits

    def random_bit(self) -> int:
        return int(self.rng.integers(2))
