from .data_converter import convert_field, to_report_value
from .errors import ConfigurationError, DomainError, SourceExhaustedError, TranscriptError
from .hash_ledger import ReportHashLedger
from .rng import make_rng, trial_rng

__all__ = [
    'convert_field',
    'to_report_value',
    'ConfigurationError',
    'DomainError',
    'SourceExhaustedError',
    'TranscriptError',
    'ReportHashLedger',
    'make_rng',
    'trial_rng',
]
