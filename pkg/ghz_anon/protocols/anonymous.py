# protocols/anonymous.py
"""
Classical anonymous primitives on a shared GHZ resource: parity, logical OR
(veto), receiver notification, receiver authentication and collision detection.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .base_protocol import BaseProtocol
from .network import NetworkConfig
from .transcript import Transcript, TranscriptRecord
from ..quantum.register import (
    BORN_TOLERANCE,
    QuantumRegister,
    apply_paulis,
    ghz_state,
    outcome_distribution,
    sample_outcome,
)
from ..utils.errors import ConfigurationError, DomainError, TranscriptError


@dataclass
class ParityRound:
    """Result of one parity invocation"""

    y: int
    y_record: TranscriptRecord
    inputs: Dict[int, TranscriptRecord] = field(default_factory=dict)
    outcomes: Dict[int, TranscriptRecord] = field(default_factory=dict)


@dataclass
class VetoResult:
    """Result of one logical-OR invocation"""

    V: int
    V_record: TranscriptRecord
    rounds: List[Tuple[Tuple[int, ...], ParityRound]] = field(default_factory=list)


class AnonymousNetwork(BaseProtocol):
    """Runs the anonymous primitives on one network, writing into shared transcripts"""

    def parity_round(self, transcript: Transcript, label: str, inputs: Sequence[int],
                     withhold: Optional[int] = None, input_name: str = 'x') -> ParityRound:
        """
        One parity invocation on a fresh copy

        Every agent with input 1 applies Z, all measure X and broadcast their
        outcome except ``withhold``, who keeps it private. y is the XOR of all
        outcomes; it is public unless an outcome was withheld.

        Args:
            transcript: Transcript to append to
            label: Round label
            inputs: One bit per agent
            withhold: Agent keeping its outcome private
            input_name: Record name of the inputs ('x', 'p', ...)
        """
        inputs = self.cfg.check_bits(inputs)
        if withhold is not None:
            withhold = self.cfg.check_agent(withhold)

        state = self.draw_copy()
        flips = {agent: 'Z' for agent, bit in zip(self.cfg.agents, inputs) if bit}
        if flips:
            state = apply_paulis(state, flips)

        input_records = {
            agent: transcript.private(label, agent, input_name, bit)
            for agent, bit in zip(self.cfg.agents, inputs)
        }

        outcome = sample_outcome(state, self.cfg.agents, 'X', self.cfg.rng)
        outcome_records = {}
        for agent, bit in zip(self.cfg.agents, outcome.bits):
            if agent == withhold:
                outcome_records[agent] = transcript.private(label, agent, 'a', bit)
            else:
                outcome_records[agent] = transcript.broadcast(label, agent, 'a', bit)

        y = outcome.parity
        if not self.quiet:
            self.logger.debug(f"{transcript.protocol} {label}: inputs {inputs} outcomes {outcome.bits} y={y}")
        y_record = transcript.derived(label, withhold, 'y', y, 'xor', outcome_records.values())
        return ParityRound(y, y_record, input_records, outcome_records)

    def logical_or(self, transcript: Transcript, prefix: str, inputs: Sequence[int]) -> VetoResult:
        """
        S parity rounds on randomized inputs: agent i feeds a random bit when x_i = 1

        V = 1 iff some round has parity 1.
        """
        inputs = self.cfg.check_bits(inputs)
        for agent, bit in zip(self.cfg.agents, inputs):
            transcript.private(prefix, agent, 'x', bit)

        rounds = []
        for t in range(1, self.cfg.S + 1):
            p = tuple(self.cfg.random_bit() if bit else 0 for bit in inputs)
            rounds.append((p, self.parity_round(transcript, f"{prefix}/{t}", p, input_name='p')))

        V = int(any(r.y for _, r in rounds))
        V_record = transcript.derived(prefix, None, 'V', V, 'or', [r.y_record for _, r in rounds])
        return VetoResult(V, V_record, rounds)

    def notification(self, transcript: Transcript, sender: int, receiver: int) -> Tuple[int, ...]:
        """
        One round block per agent; in the receiver's block the sender feeds random bits

        Agent i withholds its outcome in its own block and believes it is the
        receiver iff one of its S parities is 1. The sender's own block uses
        all-zero inputs.
        """
        sender = self.cfg.check_agent(sender)
        receiver = self.cfg.check_agent(receiver)
        if sender == receiver:
            raise ConfigurationError(f"Agent {sender} cannot notify itself")
        transcript.meta.update({'sender': int(sender), 'receiver': int(receiver)})

        beliefs = []
        for agent in self.cfg.agents:
            rounds = []
            for t in range(1, self.cfg.S + 1):
                p = [0] * self.n
                if agent == receiver:
                    p[sender - 1] = self.cfg.random_bit()
                rounds.append(self.parity_round(transcript, f"notify/{agent}/{t}", p,
                                                withhold=agent, input_name='p'))
            belief = int(any(r.y for r in rounds))
            transcript.derived(f"notify/{agent}", agent, 'y', belief, 'or', [r.y_record for r in rounds])
            beliefs.append(belief)

        self.update_progress('notify', 'done', details=f"beliefs {beliefs}")
        return tuple(beliefs)

    def authentication(self, transcript: Transcript, notification: Transcript, sender: int,
                       tamper: Optional[Mapping[int, int]] = None) -> bool:
        """
        Replay the notification round values so the sender can check the receiver

        In round t every agent j != sender inputs its own notification parity
        y_j^(t) and the sender inputs 0; the sender compares each parity with the
        bit it fed into the receiver's block.

        Args:
            transcript: Transcript to append to
            notification: Completed notification transcript
            sender: The sender
            tamper: Optional {agent: round} map of replayed inputs to flip

        Returns:
            True if the sender aborts
        """
        sender = self.cfg.check_agent(sender)
        receiver = notification.meta.get('receiver')
        if receiver is None or notification.meta.get('sender') != sender:
            raise TranscriptError("Notification transcript does not belong to this sender")
        tamper = dict(tamper or {})
        for agent, t in tamper.items():
            self.cfg.check_agent(agent)
            if agent == sender or not 1 <= t <= self.cfg.S:
                raise DomainError(f"Cannot tamper with agent {agent} round {t}")

        mismatches = 0
        for t in range(1, self.cfg.S + 1):
            label = f"auth/{t}"
            replay = []
            for agent in self.cfg.agents:
                if agent == sender:
                    replay.append(0)
                    continue
                value = notification.find(f"notify/{agent}/{t}", 'y', agent=agent, kind='derived').value
                replay.append(value ^ 1 if tamper.get(agent) == t else value)

            expected = notification.find(f"notify/{receiver}/{t}", 'p', agent=sender, kind='private').value
            parity = self.parity_round(transcript, label, replay, input_name='y')
            expected_record = transcript.private(label, sender, 'p', expected)
            check = transcript.derived(label, sender, 'mismatch', parity.y ^ expected, 'xor',
                                       [parity.y_record, expected_record])
            mismatches += check.value

        abort = mismatches > self.cfg.auth_tolerance
        transcript.meta['auth_mismatches'] = mismatches
        if abort:
            self.handle_abort(transcript, 'authentication')
        return abort

    def collision_detection(self, transcript: Transcript, wish_bits: Sequence[int]) -> int:
        """
        Veto A on the wish bits, then Veto B on the detection flags of the wishers

        A wisher detects another sender iff in some Veto A round y != p_i.

        Returns:
            0 (no sender), 1 (single sender) or 2 (collision)
        """
        wish_bits = self.cfg.check_bits(wish_bits, 'wish bits')
        veto_a = self.logical_or(transcript, 'vetoA', wish_bits)
        if veto_a.V == 0:
            transcript.derived('collision', None, 'V', 0, 'collision', [veto_a.V_record])
            return 0

        detected = tuple(
            int(bool(wish) and any(r.y ^ p[i] for p, r in veto_a.rounds))
            for i, wish in enumerate(wish_bits)
        )
        veto_b = self.logical_or(transcript, 'vetoB', detected)
        V = 2 if veto_b.V else 1
        transcript.derived('collision', None, 'V', V, 'collision', [veto_a.V_record, veto_b.V_record])
        return V


def run_parity(cfg: NetworkConfig, inputs: Sequence[int],
               withhold: Optional[int] = None) -> Tuple[int, Transcript]:
    """Parity of the inputs; with ``withhold`` the value is known only to that agent"""
    transcript = Transcript('parity', cfg.n)
    y = AnonymousNetwork(cfg, quiet=True).parity_round(transcript, 'parity', inputs, withhold).y
    transcript.output = y
    return y, transcript


def run_logical_or(cfg: NetworkConfig, inputs: Sequence[int]) -> Tuple[int, Transcript]:
    transcript = Transcript('veto', cfg.n)
    V = AnonymousNetwork(cfg, quiet=True).logical_or(transcript, 'veto', inputs).V
    transcript.output = V
    return V, transcript


def run_notification(cfg: NetworkConfig, sender: int, receiver: int) -> Tuple[Tuple[int, ...], Transcript]:
    """Per-agent beliefs y_i of being the receiver"""
    transcript = Transcript('notify', cfg.n)
    beliefs = AnonymousNetwork(cfg, quiet=True).notification(transcript, sender, receiver)
    transcript.output = list(beliefs)
    return beliefs, transcript


def run_authentication(cfg: NetworkConfig, notification_transcript: Transcript, sender: int,
                       tamper: Optional[Mapping[int, int]] = None) -> Tuple[bool, Transcript]:
    transcript = Transcript('authenticate', cfg.n)
    abort = AnonymousNetwork(cfg, quiet=True).authentication(transcript, notification_transcript, sender, tamper)
    transcript.output = abort
    return abort, transcript


def run_collision_detection(cfg: NetworkConfig, wish_bits: Sequence[int]) -> Tuple[int, Transcript]:
    transcript = Transcript('collision', cfg.n)
    V = AnonymousNetwork(cfg, quiet=True).collision_detection(transcript, wish_bits)
    transcript.output = V
    return V, transcript


def parity_broadcast_distribution(n: int, inputs: Sequence[int],
                                  state: Optional[QuantumRegister] = None) -> Dict[Tuple[int, ...], float]:
    """
    Exact distribution of the n broadcast outcomes of one parity round

    Args:
        n: Number of agents
        inputs: One bit per agent
        state: Resource copy, |psi+> when omitted
    """
    if len(inputs) != n:
        raise DomainError(f"Expected {n} inputs, got {len(inputs)}")
    state = state if state is not None else ghz_state(n, '+')
    flips = {i: 'Z' for i, bit in enumerate(inputs, 1) if bit}
    if flips:
        state = apply_paulis(state, flips)
    return outcome_distribution(state, range(1, n + 1), 'X')


def supported_parities(n: int, inputs: Sequence[int]) -> set:
    """Parities of every outcome with non-zero Born probability"""
    distribution = parity_broadcast_distribution(n, inputs)
    return {sum(bits) % 2 for bits, p in distribution.items() if p > BORN_TOLERANCE}


def total_variation(a: Mapping, b: Mapping) -> float:
    """Total variation distance of two distributions given as outcome -> probability maps"""
    keys = set(a) | set(b)
    return 0.5 * sum(abs(a.get(k, 0.0) - b.get(k, 0.0)) for k in keys)
