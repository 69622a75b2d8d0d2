# tests/test_base_protocol.py

import pytest
from unittest.mock import MagicMock, patch
from ghz_anon.protocols.base_protocol import BaseProtocol
from ghz_anon.protocols.network import NetworkConfig
from ghz_anon.protocols.transcript import Transcript


@pytest.fixture
def mock_logger():
    with patch('ghz_anon.protocols.base_protocol.logging') as mock_log:
        yield mock_log.getLogger.return_value


@pytest.fixture
def mock_display():
    display = MagicMock()
    return display


@pytest.fixture
def protocol(mock_logger):
    return BaseProtocol(NetworkConfig(3, rng_seed=1))


def test_init_default():
    """Test default initialization"""
    protocol = BaseProtocol(NetworkConfig(3))
    assert protocol.quiet is False
    assert protocol.display is None
    assert protocol.n == 3


def test_init_quiet():
    """Test quiet mode initialization"""
    protocol = BaseProtocol(NetworkConfig(5), quiet=True)
    assert protocol.quiet is True
    assert protocol.n == 5


def test_draw_copy_uses_source(protocol):
    """Test that copies come from the configured source"""
    copy = protocol.draw_copy()
    assert copy.n_qubits == 3


def test_update_progress_with_display(protocol, mock_display):
    """Test progress updates with display"""
    protocol.display = mock_display
    protocol.update_progress("trials", "working", 50, "Testing")
    mock_display.update.assert_called_once_with("trials", "working", 50, "Testing")


def test_update_progress_without_display(protocol):
    """Test progress updates without display"""
    protocol.update_progress("trials", "working", 50, "Testing")
    # Should not raise any errors


def test_handle_error_with_transcript(protocol, mock_display, mock_logger):
    """Test error handling marks the transcript aborted"""
    transcript = Transcript('parity', 3)
    error = Exception("Test error")
    protocol.display = mock_display

    result = protocol.handle_error("Test message", error, transcript)

    assert transcript.aborted
    assert transcript.abort_reason == "error: Test error"
    mock_display.error.assert_called_once_with("Test message")
    mock_logger.error.assert_called_once()
    assert result == error


def test_handle_error_quiet_mode():
    """Test error handling in quiet mode"""
    protocol = BaseProtocol(NetworkConfig(3), quiet=True)
    error = Exception("Test error")

    with patch.object(protocol, 'logger') as logger:
        result = protocol.handle_error("Test message", error)
        logger.error.assert_not_called()
    assert result == error


def test_handle_error_keeps_first_abort_reason(protocol):
    """Test that an earlier abort reason is not overwritten"""
    transcript = Transcript('aeg', 3)
    transcript.abort('verification')
    protocol.handle_error("Late failure", Exception("boom"), transcript)
    assert transcript.abort_reason == 'verification'


def test_handle_abort(protocol, mock_display, mock_logger):
    """Test protocol-level aborts"""
    transcript = Transcript('authenticate', 3)
    protocol.display = mock_display
    protocol.handle_abort(transcript, 'authentication')

    assert transcript.aborted
    assert transcript.abort_reason == 'authentication'
    mock_display.warning.assert_called_once_with("authenticate aborted: authentication")
    mock_logger.info.assert_called_once()


def test_handle_warning(protocol, mock_display):
    """Test warning handling"""
    protocol.display = mock_display
    protocol.handle_warning("Test warning")
    mock_display.warning.assert_called_once_with("Test warning")


def test_handle_warning_quiet_mode():
    """Test warning handling in quiet mode"""
    protocol = BaseProtocol(NetworkConfig(3), quiet=True)
    protocol.handle_warning("Test warning")  # Should not raise errors


def test_handle_success(protocol, mock_display):
    """Test success handling"""
    protocol.display = mock_display
    protocol.handle_success("Test success")
    mock_display.success.assert_called_once_with("Test success")


def test_set_display(protocol, mock_display):
    """Test display setter"""
    protocol.set_display(mock_display)
    assert protocol.display == mock_display
