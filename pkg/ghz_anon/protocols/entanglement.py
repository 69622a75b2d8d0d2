# protocols/entanglement.py
"""
Anonymous EPR-pair generation between a sender and a receiver, the full
notify / authenticate / generate session, and exact enumerators of the
protocol's branches and broadcast distributions.
"""

from collections import defaultdict
from dataclasses import dataclass
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .anonymous import AnonymousNetwork
from .network import NetworkConfig
from .transcript import Transcript, bits_to_str
from ..quantum.register import (
    BORN_TOLERANCE,
    PAULI_MATRICES,
    QuantumRegister,
    apply_pauli,
    apply_paulis,
    bell_pair,
    fidelity,
    ghz_state,
    measure_basis,
    outcome_distribution,
    project_out,
    sample_outcome,
)
from ..utils.errors import ConfigurationError, DomainError

ABORT_REASONS = ('timeout', 'verification', 'mode_mismatch', 'notification', 'authentication', 'collision')

DEFAULT_MAX_REPETITIONS = 2000

_SQRT2_INV = 1 / np.sqrt(2)

PAYLOAD_STATES = {
    '0': (1, 0),
    '1': (0, 1),
    '+': (1, 1),
    '-': (1, -1),
    '+i': (1, 1j),
    '-i': (1, -1j),
}

# Sender Bell outcome (z, x) -> (|0 x> + (-1)^z |1 1-x>)/sqrt(2) on (payload, sender)
BELL_BASIS = {
    (0, 0): np.array([1, 0, 0, 1], dtype=complex) * _SQRT2_INV,
    (1, 0): np.array([1, 0, 0, -1], dtype=complex) * _SQRT2_INV,
    (0, 1): np.array([0, 1, 1, 0], dtype=complex) * _SQRT2_INV,
    (1, 1): np.array([0, 1, -1, 0], dtype=complex) * _SQRT2_INV,
}


@dataclass
class AegOutcome:
    """
    Result of one entanglement-generation run

    ``pair`` holds the joint state of (sender, receiver) in that order when the
    run succeeded.
    """

    success: bool
    pair: Optional[QuantumRegister] = None
    reason: Optional[str] = None
    repetitions: int = 0
    verification_rounds: int = 0
    verification_failures: int = 0

    @property
    def fidelity(self) -> Optional[float]:
        return fidelity(self.pair, bell_pair()) if self.pair is not None else None

    def to_dict(self) -> dict:
        return {
            'success': self.success,
            'reason': self.reason,
            'repetitions': self.repetitions,
            'verification_rounds': self.verification_rounds,
            'verification_failures': self.verification_failures,
            'fidelity': None if self.fidelity is None else round(self.fidelity, 12),
        }


def _sender_receiver_pair(state: QuantumRegister, others: Sequence[int], outcomes: Sequence[int],
                          sender: int, receiver: int) -> QuantumRegister:
    """Two-qubit state of (sender, receiver) once ``others`` gave ``outcomes`` in X"""
    pair = project_out(state, others, 'X', outcomes) if others else state
    if sender > receiver:
        pair = QuantumRegister.from_amplitudes(pair.amplitudes.reshape(2, 2).T.reshape(-1))
    return pair


@dataclass
class TeleportOutcome:
    """
    Result of one anonymous teleportation

    ``fidelity`` is the squared overlap |<payload|output>|^2, the probability that
    the received qubit passes a test for the payload.
    """

    payload: np.ndarray
    aeg: AegOutcome
    output: Optional[np.ndarray] = None
    measured: Optional[Tuple[int, int]] = None
    decoded: Optional[Tuple[int, int]] = None

    @property
    def success(self) -> bool:
        return self.output is not None

    @property
    def fidelity(self) -> Optional[float]:
        if self.output is None:
            return None
        return float(min(1.0, abs(np.vdot(self.payload, self.output)) ** 2))

    @property
    def pair_fidelity(self) -> Optional[float]:
        return self.aeg.fidelity

    def to_dict(self) -> dict:
        return {
            **self.aeg.to_dict(),
            'success': self.success,
            'measured': None if self.measured is None else list(self.measured),
            'decoded': None if self.decoded is None else list(self.decoded),
            'teleport_fidelity': None if self.fidelity is None else round(self.fidelity, 12),
        }


def payload_state(payload: Union[str, int, Sequence[complex]]) -> np.ndarray:
    """
    Normalized single-qubit amplitudes for a payload

    Accepts a label ('0', '1', '+', '-', '+i', '-i'), a classical bit or two
    amplitudes.
    """
    if isinstance(payload, str):
        label = payload.strip().lower()
        if label not in PAYLOAD_STATES:
            raise ConfigurationError(f"Unknown payload '{payload}' (use {', '.join(PAYLOAD_STATES)})")
        vector = np.array(PAYLOAD_STATES[label], dtype=complex)
    elif isinstance(payload, (int, np.integer)):
        if payload not in (0, 1):
            raise DomainError(f"A classical payload must be a bit, got {payload}")
        vector = np.eye(2, dtype=complex)[int(payload)]
    else:
        vector = np.asarray(payload, dtype=complex).reshape(-1)
        if vector.size != 2:
            raise DomainError(f"A qubit payload needs 2 amplitudes, got {vector.size}")

    norm = np.linalg.norm(vector)
    if norm == 0:
        raise DomainError("Cannot teleport the zero vector")
    return vector / norm


def bell_measurement_branches(payload: np.ndarray, pair: QuantumRegister) -> Dict[Tuple[int, int], np.ndarray]:
    """
    Unnormalized receiver amplitudes for each sender Bell outcome (z, x)

    The squared norm of each vector is the probability of that outcome.
    """
    if pair.n_qubits != 2:
        raise DomainError(f"Teleportation needs a two-qubit pair, got {pair.n_qubits} qubits")
    # rows: (payload, sender) basis index, columns: receiver
    joint = np.kron(payload, pair.amplitudes).reshape(4, 2)
    return {outcome: vector.conj() @ joint for outcome, vector in BELL_BASIS.items()}


def teleport_correction(received: np.ndarray, z: int, x: int) -> np.ndarray:
    """Receiver correction Z^z X^x"""
    if x:
        received = PAULI_MATRICES['X'] @ received
    if z:
        received = PAULI_MATRICES['Z'] @ received
    return received


def teleport_fidelity(payload: Union[str, int, Sequence[complex]], pair: QuantumRegister) -> float:
    """
    Expected squared overlap of the corrected output with the payload

    Exact sum over the four Bell outcomes with correctly received correction bits.
    """
    state = payload_state(payload)
    return float(sum(
        abs(np.vdot(state, teleport_correction(branch, z, x))) ** 2
        for (z, x), branch in bell_measurement_branches(state, pair).items()
    ))


class EntanglementGenerator(AnonymousNetwork):
    """Entanglement generation on top of the anonymous primitives"""

    def _check_pair(self, sender: int, receiver: int) -> Tuple[int, int]:
        sender = self.cfg.check_agent(sender)
        receiver = self.cfg.check_agent(receiver)
        if sender == receiver:
            raise ConfigurationError(f"Agent {sender} cannot share a pair with itself")
        return sender, receiver

    def _final_flag(self, transcript: Transcript, sender: int, receiver: int, receiver_abort: int) -> int:
        """Parity round carrying the receiver's abort flag to the sender"""
        inputs = [0] * self.n
        inputs[receiver - 1] = receiver_abort
        inputs[sender - 1] = self.cfg.random_bit()
        final = self.parity_round(transcript, 'aeg/final', inputs)
        decoded = final.y ^ inputs[sender - 1]
        transcript.derived('aeg/final', sender, 'abort_flag', decoded, 'xor',
                           [final.y_record, final.inputs[sender]])
        return decoded

    def generate(self, transcript: Transcript, sender: int, receiver: int,
                 max_repetitions: int) -> AegOutcome:
        """
        Repeat until the receiver is told to keep its qubit

        Each repetition: agents outside {sender, receiver} measure X; the sender
        flips S coins and enters entanglement mode iff all are 0, broadcasting a
        random b (and applying Z^b) or its X outcome; the receiver broadcasts a
        random b'. Every agent fills exactly one slot, so the slot pattern does not
        depend on who the sender is. The mode is sent to the receiver through a
        parity round masked by the receiver's random bit. In verification mode the
        receiver checks that the XOR of all other slots and its own X outcome is 0.
        A final parity round carries the receiver's abort flag to the sender.

        Args:
            transcript: Transcript to append to
            sender: The sender
            receiver: The receiver
            max_repetitions: Cap on repetitions before a timeout abort

        Returns:
            AegOutcome with the (sender, receiver) state on success
        """
        sender, receiver = self._check_pair(sender, receiver)
        if max_repetitions < 1:
            raise ConfigurationError(f"max_repetitions must be at least 1, got {max_repetitions}")
        others = [a for a in self.cfg.agents if a not in (sender, receiver)]
        tolerance = self.cfg.verification_tolerance

        verifications = failures = 0
        receiver_abort = 0
        mismatch = False
        pair = None

        for repetition in range(1, max_repetitions + 1):
            label = f"aeg/{repetition}"
            state = self.draw_copy()

            if others:
                outcome, state = measure_basis(state, others, 'X', self.cfg.rng)
                slots = dict(zip(others, outcome.bits))
            else:
                slots = {}

            coins = tuple(int(c) for c in self.cfg.rng.integers(2, size=self.cfg.S))
            mode = int(any(coins))
            transcript.private(label, sender, 'coins', bits_to_str(coins))
            if mode == 0:
                b = self.cfg.random_bit()
                if b:
                    state = apply_pauli(state, sender, 'Z')
                slots[sender] = b
            else:
                sender_outcome, state = measure_basis(state, [sender], 'X', self.cfg.rng)
                slots[sender] = sender_outcome.bits[0]
            slots[receiver] = self.cfg.random_bit()

            slot_records = {agent: transcript.broadcast(label, agent, 'a', slots[agent])
                            for agent in self.cfg.agents}
            foreign = [slot_records[a] for a in self.cfg.agents if a != receiver]
            foreign_parity = sum(r.value for r in foreign) % 2

            mode_inputs = [0] * self.n
            mode_inputs[sender - 1] = mode
            mode_inputs[receiver - 1] = self.cfg.random_bit()
            mode_round = self.parity_round(transcript, f"{label}/mode", mode_inputs)
            decoded = mode_round.y ^ mode_inputs[receiver - 1]
            transcript.derived(f"{label}/mode", receiver, 'm', decoded, 'xor',
                               [mode_round.y_record, mode_round.inputs[receiver]])

            if decoded == 0:
                phase = transcript.derived(label, receiver, 'phase', foreign_parity, 'xor', foreign)
                if phase.value:
                    state = apply_pauli(state, receiver, 'Z')
                if mode == 0:
                    pair = _sender_receiver_pair(state, others, [slots[a] for a in others], sender, receiver)
                else:
                    mismatch = True
                break

            verifications += 1
            receiver_outcome = sample_outcome(state, [receiver], 'X', self.cfg.rng).bits[0]
            receiver_record = transcript.private(label, receiver, 'a', receiver_outcome)
            check = transcript.derived(label, receiver, 'y_prime', foreign_parity ^ receiver_outcome,
                                       'xor', foreign + [receiver_record])
            failures += check.value

            if mode == 0:
                mismatch = True
                break
            if check.value and tolerance == 0:
                receiver_abort = 1
                break
        else:
            self.handle_abort(transcript, 'timeout')
            return AegOutcome(False, None, 'timeout', max_repetitions, verifications, failures)

        if tolerance > 0 and verifications and failures > tolerance * verifications:
            receiver_abort = 1

        sender_abort = self._final_flag(transcript, sender, receiver, receiver_abort)

        if mismatch:
            reason = 'mode_mismatch'
        elif receiver_abort or sender_abort:
            reason = 'verification'
        else:
            reason = None

        if reason is not None:
            self.handle_abort(transcript, reason)
            return AegOutcome(False, None, reason, repetition, verifications, failures)

        self.update_progress('aeg', 'done', details=f"pair after {repetition} repetitions")
        return AegOutcome(True, pair, None, repetition, verifications, failures)

    def session(self, transcript: Transcript, sender: int, receiver: int, max_repetitions: int,
                collision_check: bool = False) -> AegOutcome:
        """
        Full session: optional collision detection, notification, authentication,
        then entanglement generation
        """
        sender, receiver = self._check_pair(sender, receiver)

        if collision_check:
            wishes = [0] * self.n
            wishes[sender - 1] = 1
            if self.collision_detection(transcript, wishes) != 1:
                self.handle_abort(transcript, 'collision')
                return AegOutcome(False, reason='collision')

        beliefs = self.notification(transcript, sender, receiver)
        if self.authentication(transcript, transcript, sender):
            return AegOutcome(False, reason='authentication')

        expected = tuple(int(agent == receiver) for agent in self.cfg.agents)
        if beliefs != expected:
            self.handle_abort(transcript, 'notification')
            return AegOutcome(False, reason='notification')

        return self.generate(transcript, sender, receiver, max_repetitions)

    def teleport(self, transcript: Transcript, sender: int, receiver: int,
                 payload: Union[str, int, Sequence[complex]], max_repetitions: int) -> TeleportOutcome:
        """
        Send one qubit from sender to receiver over an anonymously generated pair

        The sender Bell-measures the payload together with its half of the pair.
        Each of the two outcome bits reaches the receiver through a parity round
        masked by a random bit of the receiver, who then applies Z^z X^x.

        Args:
            transcript: Transcript to append to
            sender: The sender
            receiver: The receiver
            payload: Label, classical bit or amplitudes of the qubit to send
            max_repetitions: Repetition cap of the entanglement generation

        Returns:
            TeleportOutcome, without output when the generation aborted
        """
        state = payload_state(payload)
        sender, receiver = self._check_pair(sender, receiver)
        aeg = self.generate(transcript, sender, receiver, max_repetitions)
        if not aeg.success:
            return TeleportOutcome(state, aeg)

        branches = bell_measurement_branches(state, aeg.pair)
        outcomes = list(branches)
        probs = np.array([np.vdot(v, v).real for v in branches.values()])
        index = int(self.cfg.rng.choice(len(outcomes), p=probs / probs.sum()))
        measured = outcomes[index]
        received = branches[measured] / np.sqrt(probs[index])

        decoded = []
        for name, bit in zip(('z', 'x'), measured):
            label = f"teleport/{name}"
            inputs = [0] * self.n
            inputs[sender - 1] = bit
            inputs[receiver - 1] = self.cfg.random_bit()
            correction = self.parity_round(transcript, label, inputs, input_name='m')
            value = correction.y ^ inputs[receiver - 1]
            transcript.derived(label, receiver, name, value, 'xor',
                               [correction.y_record, correction.inputs[receiver]])
            decoded.append(value)

        output = teleport_correction(received, *decoded)
        if tuple(decoded) != measured and not self.quiet:
            self.logger.debug(f"Correction bits {measured} received as {tuple(decoded)}")
        self.update_progress('teleport', 'done', details=f"payload delivered to agent {receiver}")
        return TeleportOutcome(state, aeg, output, measured, tuple(decoded))


def run_aeg(cfg: NetworkConfig, sender: int, receiver: int,
            max_repetitions: int) -> Tuple[AegOutcome, Transcript]:
    """Entanglement generation between ``sender`` and ``receiver``"""
    transcript = Transcript('aeg', cfg.n, meta={'sender': int(sender), 'receiver': int(receiver)})
    outcome = EntanglementGenerator(cfg, quiet=True).generate(transcript, sender, receiver, max_repetitions)
    transcript.output = outcome.to_dict()
    return outcome, transcript


def run_aeg_session(cfg: NetworkConfig, sender: int, receiver: int, max_repetitions: int,
                    collision_check: bool = False) -> Tuple[AegOutcome, Transcript]:
    """Notification, authentication and entanglement generation on one transcript"""
    transcript = Transcript('aeg-session', cfg.n)
    outcome = EntanglementGenerator(cfg, quiet=True).session(
        transcript, sender, receiver, max_repetitions, collision_check
    )
    transcript.output = outcome.to_dict()
    return outcome, transcript


def anonymous_teleport(cfg: NetworkConfig, sender: int, receiver: int,
                       payload: Union[str, int, Sequence[complex]],
                       max_repetitions: int = DEFAULT_MAX_REPETITIONS) -> Tuple[TeleportOutcome, Transcript]:
    """Entanglement generation followed by teleportation of ``payload``"""
    transcript = Transcript('teleport', cfg.n, meta={'sender': int(sender), 'receiver': int(receiver)})
    outcome = EntanglementGenerator(cfg, quiet=True).teleport(transcript, sender, receiver, payload,
                                                              max_repetitions)
    transcript.output = outcome.to_dict()
    return outcome, transcript


def _check_enumeration(n: int, sender: int, receiver: int):
    if n < 3 or n % 2 == 0:
        raise DomainError(f"Networks are restricted to odd n >= 3, got n={n}")
    if sender == receiver or not (1 <= sender <= n and 1 <= receiver <= n):
        raise DomainError(f"Invalid sender/receiver pair ({sender}, {receiver}) for n={n}")


def aeg_branch_states(n: int, sender: int, receiver: int,
                      state: Optional[QuantumRegister] = None) -> List[dict]:
    """
    Every entanglement-mode branch with its corrected (sender, receiver) state

    One entry per pattern of the other agents' X outcomes with non-zero
    probability and per value of b, holding the probability and the fidelity of
    the corrected pair to |Phi+>.
    """
    _check_enumeration(n, sender, receiver)
    state = state if state is not None else ghz_state(n, '+')
    others = [a for a in range(1, n + 1) if a not in (sender, receiver)]
    distribution = outcome_distribution(state, others, 'X')

    branches = []
    for outcomes, probability in distribution.items():
        if probability <= BORN_TOLERANCE:
            continue
        for b in (0, 1):
            corrected = state
            if b:
                corrected = apply_pauli(corrected, sender, 'Z')
            if (b + sum(outcomes)) % 2:
                corrected = apply_pauli(corrected, receiver, 'Z')
            pair = _sender_receiver_pair(corrected, others, outcomes, sender, receiver)
            branches.append({
                'outcomes': outcomes,
                'b': b,
                'probability': probability / 2,
                'fidelity': fidelity(pair, bell_pair()),
            })
    return branches


def aeg_verification_branches(n: int, state: Optional[QuantumRegister] = None) -> List[dict]:
    """Every verification-mode outcome pattern of all n agents with its check value y'"""
    if n < 3 or n % 2 == 0:
        raise DomainError(f"Networks are restricted to odd n >= 3, got n={n}")
    state = state if state is not None else ghz_state(n, '+')
    return [
        {'outcomes': bits, 'probability': p, 'y_prime': sum(bits) % 2}
        for bits, p in outcome_distribution(state, range(1, n + 1), 'X').items()
        if p > BORN_TOLERANCE
    ]


def mode_parity_distribution(n: int, sender: int, receiver: int) -> Dict[int, Dict[int, float]]:
    """
    Distribution of the broadcast mode parity y given the sender's mode x

    The receiver's mask x_r is uniform; the result maps x -> {y: probability}.
    """
    _check_enumeration(n, sender, receiver)
    result = {}
    for mode in (0, 1):
        distribution = {0: 0.0, 1: 0.0}
        for mask in (0, 1):
            flips = {a: 'Z' for a, bit in ((sender, mode), (receiver, mask)) if bit}
            state = apply_paulis(ghz_state(n, '+'), flips) if flips else ghz_state(n, '+')
            for bits, p in outcome_distribution(state, range(1, n + 1), 'X').items():
                distribution[sum(bits) % 2] += p / 2
        result[mode] = distribution
    return result


def aeg_broadcast_distribution(n: int, sender: int, receiver: int, S: int) -> Dict[tuple, float]:
    """
    Exact joint distribution of everything broadcast in one repetition

    Keys are (slot bits, mode-round outcome bits), each in ascending agent order.
    """
    _check_enumeration(n, sender, receiver)
    if S < 1:
        raise DomainError(f"Security parameter must be at least 1, got {S}")
    ideal = ghz_state(n, '+')
    others = [a for a in range(1, n + 1) if a not in (sender, receiver)]
    entanglement_weight = 2.0 ** -S

    slot_distribution = defaultdict(float)
    for outcomes, p in outcome_distribution(ideal, others, 'X').items():
        for b, b_prime in product((0, 1), repeat=2):
            slots = dict(zip(others, outcomes))
            slots.update({sender: b, receiver: b_prime})
            key = (0, tuple(slots[a] for a in range(1, n + 1)))
            slot_distribution[key] += entanglement_weight * p / 4

    measured = others + [sender]
    for outcomes, p in outcome_distribution(ideal, measured, 'X').items():
        for b_prime in (0, 1):
            slots = dict(zip(measured, outcomes))
            slots[receiver] = b_prime
            key = (1, tuple(slots[a] for a in range(1, n + 1)))
            slot_distribution[key] += (1 - entanglement_weight) * p / 2

    mode_outcomes = {}
    for mode in (0, 1):
        distribution = defaultdict(float)
        for mask in (0, 1):
            flips = {a: 'Z' for a, bit in ((sender, mode), (receiver, mask)) if bit}
            state = apply_paulis(ideal, flips) if flips else ideal
            for bits, p in outcome_distribution(state, range(1, n + 1), 'X').items():
                distribution[bits] += p / 2
        mode_outcomes[mode] = distribution

    joint = defaultdict(float)
    for (mode, slots), p_slots in slot_distribution.items():
        for bits, p_mode in mode_outcomes[mode].items():
            if p_slots * p_mode > 0:
                joint[(slots, bits)] += p_slots * p_mode
    return dict(joint)


def pair_fidelities(outcomes: Sequence[AegOutcome]) -> np.ndarray:
    """Fidelities of the successful runs' pairs to |Phi+>"""
    return np.array([o.fidelity for o in outcomes if o.success and o.pair is not None], dtype=float)
