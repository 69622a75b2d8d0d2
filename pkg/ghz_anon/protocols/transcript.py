# protocols/transcript.py
"""
Classical record of one protocol execution.

Broadcast records are what every participant (and any observer) sees. Private
records are local values kept only for the simulation log. Derived records are
values recomputed from other records; each names its rule and source records so
the whole transcript can be checked with ``verify``.
"""

import json
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, IO, Iterable, List, Optional, Sequence, Tuple, Union

from ..utils.errors import TranscriptError

logger = logging.getLogger(__name__)

KINDS = ('broadcast', 'private', 'derived')
RULES = ('xor', 'or', 'collision')

Value = Union[int, str]


def bits_to_str(bits: Sequence[int]) -> str:
    return ''.join(str(int(b)) for b in bits)


def str_to_bits(text: str) -> Tuple[int, ...]:
    if any(c not in '01' for c in text):
        raise TranscriptError(f"Not a bit string: '{text}'")
    return tuple(int(c) for c in text)


@dataclass(frozen=True)
class TranscriptRecord:
    seq: int
    round: str
    agent: Optional[int]
    kind: str
    name: str
    value: Value
    rule: Optional[str] = None
    sources: Tuple[int, ...] = ()

    def to_dict(self) -> Dict[str, Any]:
        record = {
            'seq': self.seq,
            'round': self.round,
            'agent': self.agent,
            'kind': self.kind,
            'name': self.name,
            'value': self.value,
        }
        if self.kind == 'derived':
            record['rule'] = self.rule
            record['sources'] = list(self.sources)
        return record


@dataclass
class Transcript:
    """Ordered, append-only log of one execution"""

    protocol: str
    n: int
    records: List[TranscriptRecord] = field(default_factory=list)
    meta: Dict[str, Any] = field(default_factory=dict)
    output: Any = None
    aborted: bool = False
    abort_reason: Optional[str] = None

    def _append(self, round_label: str, agent: Optional[int], kind: str, name: str, value,
                rule: Optional[str] = None, sources: Iterable[int] = ()) -> TranscriptRecord:
        if not isinstance(value, (int, str)):
            value = bits_to_str(value)
        record = TranscriptRecord(
            seq=len(self.records),
            round=round_label,
            agent=agent,
            kind=kind,
            name=name,
            value=int(value) if isinstance(value, int) else value,
            rule=rule,
            sources=tuple(sources),
        )
        self.records.append(record)
        return record

    def broadcast(self, round_label: str, agent: int, name: str, value) -> TranscriptRecord:
        return self._append(round_label, agent, 'broadcast', name, value)

    def private(self, round_label: str, agent: int, name: str, value) -> TranscriptRecord:
        return self._append(round_label, agent, 'private', name, value)

    def derived(self, round_label: str, agent: Optional[int], name: str, value, rule: str,
                sources: Iterable[TranscriptRecord]) -> TranscriptRecord:
        """
        Record a value computed from earlier records

        Args:
            agent: Agent holding the value, None when it is public
            rule: 'xor', 'or' or 'collision'
            sources: Records the value was computed from
        """
        if rule not in RULES:
            raise TranscriptError(f"Unknown derivation rule '{rule}'")
        return self._append(round_label, agent, 'derived', name, value, rule, (r.seq for r in sources))

    def abort(self, reason: str):
        self.aborted = True
        self.abort_reason = reason
        logger.debug(f"{self.protocol} aborted: {reason}")

    def find(self, round_label: str, name: str, agent: Optional[int] = None,
             kind: Optional[str] = None) -> TranscriptRecord:
        """Unique record matching the filters"""
        matches = [
            r for r in self.records
            if r.round == round_label and r.name == name
            and (agent is None or r.agent == agent)
            and (kind is None or r.kind == kind)
        ]
        if len(matches) != 1:
            raise TranscriptError(
                f"Expected one '{name}' record in round '{round_label}' (agent={agent}), found {len(matches)}"
            )
        return matches[0]

    def rounds(self) -> List[str]:
        seen = []
        for record in self.records:
            if record.round not in seen:
                seen.append(record.round)
        return seen

    def observer_view(self) -> List[Tuple[str, int, str, Value]]:
        """Everything a passive observer sees: the broadcast records, in order"""
        return [(r.round, r.agent, r.name, r.value) for r in self.records if r.kind == 'broadcast']

    def verify(self) -> bool:
        """
        Recompute every derived record from its sources

        Raises:
            TranscriptError: on the first record that does not match
        """
        for record in self.records:
            if record.kind != 'derived':
                continue
            values = []
            for seq in record.sources:
                if seq >= record.seq:
                    raise TranscriptError(f"Record {record.seq} depends on later record {seq}")
                source = self.records[seq]
                if not isinstance(source.value, int):
                    raise TranscriptError(f"Record {seq} is not a single bit")
                values.append(source.value)

            expected = _evaluate(record.rule, values)
            if expected != record.value:
                raise TranscriptError(
                    f"Record {record.seq} ({record.round}/{record.name}) holds {record.value}, "
                    f"its sources give {expected}"
                )
        return True

    def to_dict(self) -> Dict[str, Any]:
        return {
            'protocol': self.protocol,
            'n': self.n,
            'meta': self.meta,
            'output': self.output,
            'aborted': self.aborted,
            'abort_reason': self.abort_reason,
            'records': [r.to_dict() for r in self.records],
        }

    def write_jsonl(self, stream: IO[str]):
        """One JSON object per record, sorted keys"""
        for record in self.records:
            stream.write(json.dumps(record.to_dict(), sort_keys=True) + '\n')


def _evaluate(rule: str, values: List[int]) -> int:
    if rule == 'xor':
        result = 0
        for v in values:
            result ^= v
        return result
    if rule == 'or':
        return int(any(values))
    if rule == 'collision':
        if len(values) == 1:
            if values[0] != 0:
                raise TranscriptError("Collision result without a second veto needs a zero first veto")
            return 0
        if len(values) != 2:
            raise TranscriptError(f"Collision rule takes one or two vetoes, got {len(values)}")
        first, second = values
        if first == 0:
            return 0
        return 2 if second else 1
    raise TranscriptError(f"Unknown derivation rule '{rule}'")
