import os
import yaml
from typing import Dict, Any, List, Optional
import logging

from dotenv import load_dotenv

EXPERIMENT_KINDS = (
    'spectrum', 'lr-bound', 'selftest', 'parity', 'veto', 'notify',
    'authenticate', 'collision', 'aeg', 'teleport', 'guess', 'bounds-sweep',
)


class ConfigLoader:
    """Handles loading and parsing of experiment configuration"""

    ENV_VAR = 'GHZ_ANON_CONFIG'

    POTENTIAL_PATHS = [
        os.path.join(os.path.dirname(__file__), 'config.yaml'),
        '/etc/ghz_anon/config.yaml'
    ]

    def __init__(self, config_path: Optional[str] = None, env_file: Optional[str] = '.env'):
        """
        Initialize the configuration loader

        Args:
            config_path: Explicit configuration file, bypasses the lookup
            env_file: dotenv file consulted before the environment lookup
        """
        self.logger = logging.getLogger(__name__)

        if env_file and os.path.exists(env_file):
            load_dotenv(env_file)
            self.logger.debug(f".env file loaded from {env_file}")

        checked = list(self.POTENTIAL_PATHS)
        if config_path is None:
            env_path = os.environ.get(self.ENV_VAR)
            if env_path:
                checked.insert(0, env_path)
            config_path = next((path for path in checked if os.path.exists(path)), None)

        if not config_path or not os.path.exists(config_path):
            raise FileNotFoundError(
                f"Configuration file not found. Checked paths: {[config_path] if config_path else checked}"
            )

        self.config_path = config_path
        self.config = self._load_config()

    def _load_config(self) -> Dict[str, Any]:
        """Load configuration from YAML file"""
        try:
            with open(self.config_path, 'r') as config_file:
                config = yaml.safe_load(config_file) or {}
        except Exception as e:
            self.logger.error(f"Error loading configuration: {e}")
            raise

        if not isinstance(config, dict):
            raise ValueError(f"Configuration root must be a mapping: {self.config_path}")
        return config

    def get_experiment_kinds(self) -> List[str]:
        """Get list of configured experiment kinds"""
        return list(self.config.get('experiments', {}).keys())

    def get_experiment_defaults(self, kind: str) -> Dict[str, Any]:
        """Defaults for one experiment kind, merged over the shared ``defaults`` block"""
        if kind not in EXPERIMENT_KINDS:
            raise ValueError(f"Unknown experiment kind: {kind}")
        try:
            experiments = self.config.get('experiments', {})
            merged = dict(self.config.get('defaults', {}))
            merged.update(experiments.get(kind) or {})
            return merged
        except Exception as e:
            self.logger.error(f"Error retrieving experiment configuration: {e}")
            raise

    def get_protocol_defaults(self) -> Dict[str, Any]:
        """Get protocol parameters (S, repetition cap, tolerances)"""
        return self.config.get('protocol', {})

    def get_logging_config(self) -> Dict[str, Any]:
        """Get logging configuration"""
        return self.config.get('logging', {})

    def get_rng_config(self) -> Dict[str, Any]:
        """Get random-stream configuration"""
        return self.config.get('rng', {})

    def get_report_config(self) -> Dict[str, Any]:
        """Get report output configuration"""
        return self.config.get('report', {})

    def reload_config(self):
        """Reload configuration from file"""
        self.config = self._load_config()
