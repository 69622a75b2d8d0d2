from .operator import (
    PauliString,
    BellOperator,
    SpectrumReport,
    build_bell_operator,
    expectation,
    term_expectations,
    operator_matrix,
    spectrum,
    lr_max,
    lattice_values,
    bell_eigenstates,
)
from .self_test import SelfTestVerdict, self_test, certify_pool, fidelity_deficit_bounds

__all__ = [
    'PauliString',
    'BellOperator',
    'SpectrumReport',
    'build_bell_operator',
    'expectation',
    'term_expectations',
    'operator_matrix',
    'spectrum',
    'lr_max',
    'lattice_values',
    'bell_eigenstates',
    'SelfTestVerdict',
    'self_test',
    'certify_pool',
    'fidelity_deficit_bounds',
]
