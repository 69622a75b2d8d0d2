# utils/errors.py


class DomainError(ValueError):
    """Raised when an argument falls outside the mathematical domain of an operation"""


class ConfigurationError(ValueError):
    """Raised for inconsistent network, protocol or experiment settings"""


class SourceExhaustedError(RuntimeError):
    """Raised when a finite state source has no copies left"""


class TranscriptError(ValueError):
    """Raised when a transcript is missing rounds needed for replay or fails verification"""
