# tests/test_hash_ledger.py

import pytest
import os
import json
import logging
from ghz_anon.utils.hash_ledger import ReportHashLedger


@pytest.fixture(autouse=True)
def setup_logging():
    """Configure logging to suppress output during tests"""
    logging.getLogger().setLevel(logging.CRITICAL)
    yield
    logging.getLogger().setLevel(logging.INFO)


@pytest.fixture
def ledger_path(tmp_path):
    return str(tmp_path / 'ledger' / 'hashes.json')


@pytest.fixture
def ledger(ledger_path):
    return ReportHashLedger(ledger_path, quiet=True)


PAYLOAD = b'{"estimate": 0.5, "experiment": "parity"}\n'


def test_init_with_nonexistent_cache(ledger):
    """Test initializing without a ledger file"""
    assert isinstance(ledger.report_hashes, dict)
    assert len(ledger.report_hashes) == 0


def test_calculate_hash():
    """Test digests are SHA-256 hex strings and depend on the bytes"""
    digest = ReportHashLedger.calculate_hash(PAYLOAD)
    assert len(digest) == 64
    assert digest == ReportHashLedger.calculate_hash(PAYLOAD)
    assert digest != ReportHashLedger.calculate_hash(PAYLOAD + b' ')


def test_check_unseen_plan(ledger):
    """Test a plan seen for the first time"""
    assert ledger.check('parity:{}:seed=0', PAYLOAD) is None


def test_record_and_match(ledger, ledger_path):
    """Test recorded digests match identical reports"""
    digest = ledger.record('parity:{}:seed=0', PAYLOAD)
    assert ledger.check('parity:{}:seed=0', PAYLOAD) is True
    assert os.path.exists(ledger_path)

    with open(ledger_path) as f:
        assert json.load(f) == {'parity:{}:seed=0': digest}


def test_drift_is_flagged(ledger, caplog):
    """Test a changed report is reported as drift"""
    ledger.record('parity:{}:seed=0', PAYLOAD)
    with caplog.at_level(logging.WARNING):
        assert ledger.check('parity:{}:seed=0', PAYLOAD.replace(b'0.5', b'0.6')) is False
    assert "Report drift" in caplog.text


def test_ledger_persists(ledger, ledger_path):
    """Test a new instance sees earlier records"""
    ledger.record('veto:{}:seed=1', PAYLOAD)
    reloaded = ReportHashLedger(ledger_path, quiet=True)
    assert reloaded.check('veto:{}:seed=1', PAYLOAD) is True


def test_ledger_file_ends_with_newline(ledger, ledger_path):
    """Test the ledger file is newline-terminated"""
    ledger.record('veto:{}:seed=1', PAYLOAD)
    with open(ledger_path) as f:
        assert f.read().endswith('\n')


def test_corrupt_ledger(ledger_path):
    """Test a corrupt ledger is treated as empty"""
    os.makedirs(os.path.dirname(ledger_path), exist_ok=True)
    with open(ledger_path, 'w') as f:
        f.write('{not json')
    ledger = ReportHashLedger(ledger_path, quiet=True)
    assert ledger.report_hashes == {}


def test_clear_cache(ledger, ledger_path):
    """Test clearing the ledger"""
    ledger.record('veto:{}:seed=1', PAYLOAD)
    ledger.clear_cache()
    assert ledger.report_hashes == {}
    with open(ledger_path) as f:
        assert json.load(f) == {}
