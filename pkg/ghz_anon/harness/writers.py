# harness/writers.py
"""Report and transcript serialization. Every file ends with a newline."""

import csv
import io
import json
import logging
import os
from typing import Iterable, List, Optional

from .stats import BoundReport
from ..protocols.transcript import Transcript

logger = logging.getLogger(__name__)

FORMATS = ('json', 'csv')

CSV_COLUMNS = ['experiment', 'params', 'estimate', 'stderr', 'ci99_lo', 'ci99_hi', 'bound',
               'relation', 'pass', 'trials', 'seed', 'rng']


def to_json_lines(reports: Iterable[BoundReport], timing: bool = False) -> str:
    """One JSON object per report, sorted keys"""
    return ''.join(json.dumps(r.to_dict(timing), sort_keys=True) + '\n' for r in reports)


def _flat_params(params: dict) -> str:
    return ';'.join(f"{k}={_flat_value(v)}" for k, v in sorted(params.items()) if v is not None)


def _flat_value(value) -> str:
    if isinstance(value, list):
        return ','.join(str(v) for v in value)
    if isinstance(value, dict):
        return ','.join(f"{k}:{v}" for k, v in value.items())
    return str(value)


def to_csv(reports: Iterable[BoundReport], timing: bool = False) -> str:
    """Header plus one row per report; details are left out"""
    columns = CSV_COLUMNS + (['wall_time_ms'] if timing else [])
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=columns, lineterminator='\n')
    writer.writeheader()
    for report in reports:
        row = report.to_dict(timing)
        row['params'] = _flat_params(row['params'])
        row['ci99_lo'], row['ci99_hi'] = row.pop('ci99')
        row['bound'] = _flat_value(row['bound'])
        row.pop('details', None)
        writer.writerow(row)
    return buffer.getvalue()


def serialize_reports(reports: List[BoundReport], fmt: str = 'json', timing: bool = False) -> str:
    if fmt not in FORMATS:
        raise ValueError(f"Unknown report format '{fmt}' (use {' or '.join(FORMATS)})")
    return to_json_lines(reports, timing) if fmt == 'json' else to_csv(reports, timing)


def write_text(text: str, path: str):
    """Write ``text`` to ``path``, creating the directory and ending with a newline"""
    if not text.endswith('\n'):
        text += '\n'
    directory = os.path.dirname(path)
    try:
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(path, 'w', encoding='utf-8', newline='') as handle:
            handle.write(text)
    except OSError as e:
        logger.error(f"Could not write {path}: {e}")
        raise
    logger.debug(f"Wrote {len(text)} bytes to {path}")


def write_reports(reports: List[BoundReport], path: Optional[str], fmt: str = 'json',
                  timing: bool = False) -> str:
    """Serialize reports to ``path`` (returned text is what was written)"""
    text = serialize_reports(reports, fmt, timing)
    if path:
        write_text(text, path)
    return text


def write_transcript(transcript: Transcript, path: str):
    buffer = io.StringIO()
    transcript.write_jsonl(buffer)
    write_text(buffer.getvalue(), path)
