from .protocols.base_protocol import BaseProtocol
from .protocols.network import NetworkConfig
from .protocols.anonymous import AnonymousNetwork
from .protocols.entanglement import EntanglementGenerator
from .adversary.noise import NoiseSpec, NoisySource
from .config.config_loader import ConfigLoader
from .harness.plan import ExperimentPlan
from .harness.runner import run_experiment
from .utils.data_converter import convert_field
from .utils.hash_ledger import ReportHashLedger
from .cli.display import create_display

__version__ = '0.1.0'

__all__ = [
    'BaseProtocol',
    'NetworkConfig',
    'AnonymousNetwork',
    'EntanglementGenerator',
    'NoiseSpec',
    'NoisySource',
    'ConfigLoader',
    'ExperimentPlan',
    'run_experiment',
    'convert_field',
    'ReportHashLedger',
    'create_display'
]
