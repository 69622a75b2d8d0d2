# tests/test_transcript.py

import io
import json
import pytest
from ghz_anon.protocols.transcript import Transcript, bits_to_str, str_to_bits
from ghz_anon.utils.errors import TranscriptError


@pytest.fixture
def transcript():
    """Two broadcasts and their XOR"""
    t = Transcript('parity', 3)
    a = t.broadcast('r1', 1, 'a', 1)
    b = t.broadcast('r1', 2, 'a', 1)
    c = t.private('r1', 3, 'a', 0)
    t.derived('r1', None, 'y', 0, 'xor', [a, b, c])
    return t


def test_bit_string_helpers():
    """Test bit string conversion"""
    assert bits_to_str((1, 0, 1)) == '101'
    assert str_to_bits('0110') == (0, 1, 1, 0)
    with pytest.raises(TranscriptError):
        str_to_bits('012')


def test_records_are_sequenced(transcript):
    """Test sequence numbers and kinds"""
    assert [r.seq for r in transcript.records] == [0, 1, 2, 3]
    assert [r.kind for r in transcript.records] == ['broadcast', 'broadcast', 'private', 'derived']
    assert transcript.records[3].sources == (0, 1, 2)


def test_sequence_values_become_bit_strings():
    """Test tuple values are stored as strings"""
    t = Transcript('aeg', 3)
    record = t.private('aeg/1', 1, 'coins', (0, 1, 1))
    assert record.value == '011'
    assert t.private('aeg/1', 1, 'flag', True).value == 1


def test_verify_accepts_consistent(transcript):
    """Test verification of a consistent transcript"""
    assert transcript.verify()


def test_verify_rejects_wrong_value():
    """Test verification catches a wrong derived value"""
    t = Transcript('parity', 3)
    a = t.broadcast('r1', 1, 'a', 1)
    t.derived('r1', None, 'y', 0, 'xor', [a])
    with pytest.raises(TranscriptError, match="its sources give 1"):
        t.verify()


def test_verify_rejects_string_sources():
    """Test derived values need single-bit sources"""
    t = Transcript('aeg', 3)
    coins = t.private('aeg/1', 1, 'coins', '01')
    t.derived('aeg/1', 1, 'mode', 1, 'or', [coins])
    with pytest.raises(TranscriptError, match="not a single bit"):
        t.verify()


def test_unknown_rule():
    """Test unknown derivation rules"""
    t = Transcript('veto', 3)
    with pytest.raises(TranscriptError, match="Unknown derivation rule"):
        t.derived('veto', None, 'V', 1, 'and', [])


@pytest.mark.parametrize("first,second,expected", [(0, 0, 0), (0, 1, 0), (1, 0, 1), (1, 1, 2)])
def test_collision_rule(first, second, expected):
    """Test the collision rule on two vetoes"""
    t = Transcript('collision', 3)
    a = t.broadcast('vetoA', 1, 'V', first)
    b = t.broadcast('vetoB', 1, 'V', second)
    t.derived('collision', None, 'V', expected, 'collision', [a, b])
    assert t.verify()


def test_collision_rule_single_veto():
    """Test a single zero veto gives 0 and a single one is invalid"""
    t = Transcript('collision', 3)
    a = t.broadcast('vetoA', 1, 'V', 0)
    t.derived('collision', None, 'V', 0, 'collision', [a])
    assert t.verify()

    bad = Transcript('collision', 3)
    b = bad.broadcast('vetoA', 1, 'V', 1)
    bad.derived('collision', None, 'V', 1, 'collision', [b])
    with pytest.raises(TranscriptError):
        bad.verify()


def test_or_rule():
    """Test the OR rule"""
    t = Transcript('veto', 3)
    records = [t.broadcast('veto/1', 1, 'y', 0), t.broadcast('veto/2', 1, 'y', 1)]
    t.derived('veto', None, 'V', 1, 'or', records)
    assert t.verify()


def test_find(transcript):
    """Test unique lookups"""
    assert transcript.find('r1', 'a', agent=3).value == 0
    assert transcript.find('r1', 'y', kind='derived').value == 0
    with pytest.raises(TranscriptError, match="found 3"):
        transcript.find('r1', 'a')
    with pytest.raises(TranscriptError, match="found 0"):
        transcript.find('r2', 'a', agent=1)


def test_rounds_keep_order():
    """Test round labels in first-seen order"""
    t = Transcript('veto', 3)
    t.private('veto', 1, 'x', 1)
    t.broadcast('veto/1', 1, 'a', 0)
    t.broadcast('veto/2', 1, 'a', 0)
    t.private('veto', 2, 'x', 0)
    assert t.rounds() == ['veto', 'veto/1', 'veto/2']


def test_observer_view_hides_private(transcript):
    """Test observers see only broadcasts"""
    assert transcript.observer_view() == [('r1', 1, 'a', 1), ('r1', 2, 'a', 1)]


def test_abort(transcript):
    """Test abort bookkeeping"""
    transcript.abort('timeout')
    assert transcript.aborted
    assert transcript.to_dict()['abort_reason'] == 'timeout'


def test_to_dict_and_jsonl(transcript):
    """Test serialization"""
    data = transcript.to_dict()
    assert data['protocol'] == 'parity'
    assert len(data['records']) == 4
    assert 'rule' not in data['records'][0]
    assert data['records'][3]['rule'] == 'xor'
    assert data['records'][3]['sources'] == [0, 1, 2]

    buffer = io.StringIO()
    transcript.write_jsonl(buffer)
    lines = buffer.getvalue().splitlines()
    assert len(lines) == 4
    assert json.loads(lines[1]) == {'seq': 1, 'round': 'r1', 'agent': 2, 'kind': 'broadcast',
                                    'name': 'a', 'value': 1}
    assert buffer.getvalue().endswith('\n')
