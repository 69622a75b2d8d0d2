# harness/plan.py

import json
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

from ..config.config_loader import EXPERIMENT_KINDS, ConfigLoader
from ..protocols.entanglement import PAYLOAD_STATES
from ..utils.data_converter import convert_field
from ..utils.errors import ConfigurationError, DomainError

logger = logging.getLogger(__name__)

PARAM_TYPES = {
    'n': 'integer',
    'S': 'integer',
    'epsilon': 'float',
    'delta': 'float',
    'junk': 'string',
    'trials': 'integer',
    'rounds': 'integer',
    'threshold': 'float',
    'test_fraction': 'float',
    'inputs': 'bits',
    'withhold': 'integer',
    'wish': 'bits',
    'sender': 'integer',
    'receiver': 'integer',
    'tamper': 'tamper',
    'auth_tolerance': 'integer',
    'verification_tolerance': 'float',
    'max_repetitions': 'integer',
    'session': 'boolean',
    'payload': 'string',
    'k': 'integer',
    'honest': 'agents',
    'n_values': 'agents',
    'S_values': 'agents',
    'epsilon_values': 'array',
}

NOISE_PARAMS = ('epsilon', 'delta', 'junk')

KIND_PARAMS = {
    'spectrum': ('n',),
    'lr-bound': ('n',),
    'selftest': ('n', 'rounds', 'threshold', 'test_fraction') + NOISE_PARAMS,
    'parity': ('n', 'inputs', 'withhold', 'trials') + NOISE_PARAMS,
    'veto': ('n', 'S', 'inputs', 'trials') + NOISE_PARAMS,
    'notify': ('n', 'S', 'sender', 'receiver', 'trials') + NOISE_PARAMS,
    'authenticate': ('n', 'S', 'sender', 'receiver', 'tamper', 'auth_tolerance', 'trials') + NOISE_PARAMS,
    'collision': ('n', 'S', 'wish', 'trials') + NOISE_PARAMS,
    'aeg': ('n', 'S', 'sender', 'receiver', 'max_repetitions', 'verification_tolerance',
            'session', 'trials') + NOISE_PARAMS,
    'teleport': ('n', 'S', 'sender', 'receiver', 'max_repetitions', 'verification_tolerance',
                 'payload', 'trials') + NOISE_PARAMS,
    'guess': ('n', 'k', 'honest') + NOISE_PARAMS,
    'bounds-sweep': ('n_values', 'S_values', 'epsilon_values'),
}

STOCHASTIC_KINDS = ('selftest', 'parity', 'veto', 'notify', 'authenticate', 'collision', 'aeg', 'teleport')


@dataclass
class ExperimentPlan:
    """
    One experiment: a kind, its parameters and where the report goes

    Args:
        kind: Experiment kind
        params: Kind-specific parameters, already converted
        seed: Root seed of all trial streams
        output_path: Report file, stdout when None
        transcript_path: JSONL file receiving the first trial's transcript
        workers: Worker processes for the trials
    """

    kind: str
    params: Dict[str, Any] = field(default_factory=dict)
    seed: int = 0
    output_path: Optional[str] = None
    transcript_path: Optional[str] = None
    workers: int = 1

    def __post_init__(self):
        self.validate()

    def validate(self):
        if self.kind not in EXPERIMENT_KINDS:
            raise ConfigurationError(f"Unknown experiment kind: {self.kind}")
        if self.seed is None or self.seed < 0:
            raise ConfigurationError(f"Seed must be a non-negative integer, got {self.seed}")
        if self.workers < 1:
            raise ConfigurationError(f"Workers must be at least 1, got {self.workers}")

        n = self.params.get('n')
        if 'n' in KIND_PARAMS[self.kind]:
            if n is None:
                raise ConfigurationError(f"{self.kind} needs n")
            if n < 3 or n % 2 == 0:
                raise DomainError(f"Networks are restricted to odd n >= 3, got n={n}")
        if self.kind == 'bounds-sweep':
            for value in self.params.get('n_values') or []:
                if value < 3 or value % 2 == 0:
                    raise DomainError(f"Networks are restricted to odd n >= 3, got n={value}")

        if self.kind in STOCHASTIC_KINDS:
            count = self.params.get('rounds' if self.kind == 'selftest' else 'trials')
            if count is None or count < 1:
                raise ConfigurationError(f"{self.kind} needs at least one trial, got {count}")
        if self.params.get('S') is not None and self.params['S'] < 1:
            raise ConfigurationError(f"Security parameter S must be at least 1, got {self.params['S']}")
        if self.params.get('epsilon') is not None and self.params['epsilon'] < 0:
            raise DomainError(f"Bell deficit must be non-negative, got {self.params['epsilon']}")
        payload = self.params.get('payload')
        if payload is not None and payload.strip().lower() not in PAYLOAD_STATES:
            raise ConfigurationError(f"Unknown payload '{payload}' (use {', '.join(PAYLOAD_STATES)})")

    def key(self) -> str:
        """Canonical identifier used by the hash ledger"""
        return f"{self.kind}:{json.dumps(self.params, sort_keys=True)}:seed={self.seed}"

    @classmethod
    def build(cls, kind: str, overrides: Optional[Dict[str, Any]] = None,
              config_loader: Optional[ConfigLoader] = None, seed: Optional[int] = None,
              **kwargs) -> 'ExperimentPlan':
        """
        Plan from configured defaults with explicit overrides on top

        Args:
            kind: Experiment kind
            overrides: Parameter values that win over the configuration (None entries ignored)
            config_loader: Configuration source, none means overrides only
            seed: Root seed, configured default when None
        """
        if kind not in EXPERIMENT_KINDS:
            raise ConfigurationError(f"Unknown experiment kind: {kind}")
        given = overrides or {}
        if given.get('epsilon') is not None and given.get('delta') is not None:
            raise ConfigurationError("Give either epsilon or delta, not both")

        raw: Dict[str, Any] = {}
        if config_loader is not None:
            raw.update(config_loader.get_protocol_defaults())
            raw.update(config_loader.get_experiment_defaults(kind))
            if seed is None:
                seed = config_loader.get_rng_config().get('seed', 0)
        raw.update({k: v for k, v in given.items() if v is not None})

        params = {}
        for name in KIND_PARAMS[kind]:
            value = convert_field(raw.get(name), PARAM_TYPES[name], strict=True)
            if name == 'epsilon_values' and value is not None:
                value = [convert_field(v, 'float', strict=True) for v in value]
            params[name] = value

        # delta, when given, defines the noise; epsilon then follows from it
        if params.get('delta') is not None:
            params['epsilon'] = None
        elif 'epsilon' in params and params['epsilon'] is None:
            params['epsilon'] = 0.0

        plan = cls(kind=kind, params=params, seed=int(seed or 0), **kwargs)
        logger.debug(f"Built plan {plan.key()}")
        return plan
