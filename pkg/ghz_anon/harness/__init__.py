from .plan import ExperimentPlan, KIND_PARAMS
from .stats import BoundReport, judge, summarize
from .runner import ExperimentRunner, run_experiment
from .writers import serialize_reports, write_reports, write_transcript

__all__ = [
    'ExperimentPlan',
    'KIND_PARAMS',
    'BoundReport',
    'judge',
    'summarize',
    'ExperimentRunner',
    'run_experiment',
    'serialize_reports',
    'write_reports',
    'write_transcript',
]
