# ghz_anon/utils/data_converter.py

from typing import Any, Dict
import logging
import math

import numpy as np

from .errors import ConfigurationError

logger = logging.getLogger(__name__)

REPORT_DIGITS = 12


def convert_field(value: Any, field_type: str, strict: bool = False) -> Any:
    """
    Convert a plan parameter from its config or command-line form

    Args:
        value: Input value to convert
        field_type: 'string', 'integer', 'float', 'boolean', 'bits', 'agents',
            'array' or 'tamper'
        strict: Raise ConfigurationError instead of returning None on failure

    Returns:
        Converted value, or None if the value is empty or conversion fails
    """
    if value is None:
        return None

    # Clean string input
    if isinstance(value, str):
        value = value.strip()
        if not value:
            return None

    try:
        if field_type == 'string':
            return str(value)

        elif field_type == 'integer':
            if isinstance(value, str):
                float_val = float(value)
                if not float_val.is_integer():
                    raise ValueError(f"'{value}' is not a whole number")
                return int(float_val)
            return int(value)

        elif field_type == 'float':
            result = float(value)
            if math.isnan(result):
                raise ValueError("NaN is not a valid parameter")
            return result

        elif field_type == 'boolean':
            if isinstance(value, bool):
                return value
            return str(value).lower().strip() in ('true', 'yes', '1', 't', 'y')

        elif field_type == 'bits':
            if isinstance(value, (bool, int, np.integer)):
                # YAML reads an unquoted 001 as the integer 1
                raise ValueError(f"bit strings must be quoted, got the number {value}")
            if isinstance(value, (list, tuple)):
                bits = [int(b) for b in value]
            else:
                text = str(value).replace(',', '').replace(' ', '')
                if any(c not in '01' for c in text):
                    raise ValueError(f"'{value}' is not a bit string")
                bits = [int(c) for c in text]
            if any(b not in (0, 1) for b in bits):
                raise ValueError(f"'{value}' holds values other than 0 and 1")
            return bits

        elif field_type == 'agents':
            if isinstance(value, (list, tuple)):
                return [int(a) for a in value]
            return [int(a) for a in str(value).split(',') if a.strip()]

        elif field_type == 'array':
            if isinstance(value, (list, tuple)):
                return list(value)
            if ',' in str(value):
                return [item.strip() for item in str(value).split(',') if item.strip()]
            return [value]

        elif field_type == 'tamper':
            return _parse_tamper(value)

        else:
            logger.warning(f"Unknown field type: {field_type}")
            return value

    except (TypeError, ValueError) as e:
        if strict:
            raise ConfigurationError(f"Cannot convert '{value}' to {field_type}: {e}")
        logger.error(f"Error converting '{value}' to {field_type}: {str(e)}")
        return None


def _parse_tamper(value: Any) -> Dict[int, int]:
    """'agent:round[,agent:round]' -> {agent: round}"""
    if isinstance(value, dict):
        return {int(k): int(v) for k, v in value.items()}
    result = {}
    for item in str(value).split(','):
        agent, _, round_index = item.partition(':')
        if not round_index:
            raise ValueError(f"'{item}' is not of the form agent:round")
        result[int(agent)] = int(round_index)
    return result


def to_report_value(value: Any) -> Any:
    """Plain JSON-safe value: numpy scalars unwrapped, floats rounded, tuples listed"""
    if value is None or isinstance(value, (bool, str)):
        return value

    if isinstance(value, (np.bool_,)):
        return bool(value)

    if isinstance(value, (int, np.integer)):
        return int(value)

    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isinf(value) or math.isnan(value):
            return str(value)
        return round(value, REPORT_DIGITS)

    if isinstance(value, dict):
        return {str(k): to_report_value(v) for k, v in value.items()}

    if isinstance(value, (list, tuple, np.ndarray)):
        return [to_report_value(v) for v in value]

    return str(value)
