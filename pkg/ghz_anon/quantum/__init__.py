from .register import (
    QuantumRegister,
    MeasurementOutcome,
    ghz_state,
    computational_state,
    bell_pair,
    apply_pauli,
    apply_paulis,
    measure_basis,
    sample_outcome,
    outcome_distribution,
    project_out,
    fidelity,
    trace_distance_pure,
)
from .source import StateSource, IdealGHZSource, FixedStateSource, QueueSource

__all__ = [
    'QuantumRegister',
    'MeasurementOutcome',
    'ghz_state',
    'computational_state',
    'bell_pair',
    'apply_pauli',
    'apply_paulis',
    'measure_basis',
    'sample_outcome',
    'outcome_distribution',
    'project_out',
    'fidelity',
    'trace_distance_pure',
    'StateSource',
    'IdealGHZSource',
    'FixedStateSource',
    'QueueSource',
]
