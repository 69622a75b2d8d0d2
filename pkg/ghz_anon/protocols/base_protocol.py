# protocols/base_protocol.py

import logging
from typing import Optional

from .network import NetworkConfig
from .transcript import Transcript
from ..cli.display import DisplayBase
from ..quantum.register import QuantumRegister


class BaseProtocol:
    """Base class for all network protocols"""

    def __init__(self, cfg: NetworkConfig, quiet: bool = False):
        """
        Initialize base protocol

        Args:
            cfg: Network the protocol runs on
            quiet: Suppress log output (used for bulk trials)
        """
        self.logger = logging.getLogger(__name__)
        self.display: Optional[DisplayBase] = None
        self.cfg = cfg
        self.quiet = quiet

    @property
    def n(self) -> int:
        return self.cfg.n

    def draw_copy(self) -> QuantumRegister:
        """Fresh resource copy from the configured source"""
        return self.cfg.source.draw(self.cfg.rng)

    def update_progress(self, stage: str, status: str = 'working',
                        progress: Optional[int] = None, details: Optional[str] = None):
        """
        Update progress display if available

        Args:
            stage: Current protocol stage
            status: Current status ('working', 'done', 'error', etc.)
            progress: Optional progress percentage (0-100)
            details: Optional status details
        """
        if self.display:
            self.display.update(stage, status, progress, details)

    def handle_error(self, message: str, error: Exception, transcript: Optional[Transcript] = None):
        """
        Handle errors consistently

        Args:
            message: Error message
            error: Exception that occurred
            transcript: Optional transcript to mark as aborted
        """
        if not self.quiet:
            self.logger.error(f"{message}: {str(error)}", exc_info=True)

        if transcript is not None and not transcript.aborted:
            transcript.abort(f"error: {error}")

        if self.display:
            self.display.error(message)

        return error

    def handle_abort(self, transcript: Transcript, reason: str):
        """
        Record a protocol-level abort

        Args:
            transcript: Transcript of the running execution
            reason: Short abort reason ('verification', 'timeout', ...)
        """
        transcript.abort(reason)
        if not self.quiet:
            self.logger.info(f"{transcript.protocol} aborted ({reason})")
        if self.display:
            self.display.warning(f"{transcript.protocol} aborted: {reason}")

    def handle_warning(self, message: str):
        if not self.quiet:
            self.logger.warning(message)
        if self.display:
            self.display.warning(message)

    def handle_success(self, message: str):
        if not self.quiet:
            self.logger.info(message)
        if self.display:
            self.display.success(message)

    def set_display(self, display: DisplayBase):
        """
        Set the display handler

        Args:
            display: Display handler instance
        """
        self.display = display
