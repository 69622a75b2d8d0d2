from .config_loader import ConfigLoader, EXPERIMENT_KINDS

__all__ = ['ConfigLoader', 'EXPERIMENT_KINDS']
