"""
CSV and JSON-lines output.

CSV floats use one fixed format so reruns with the same seeds produce
byte-identical files.
"""

import json
import logging
import os
from typing import Any, Dict, Iterable, Optional

import pandas as pd

from config import get_config

logger = logging.getLogger(__name__)


def ensure_dir(path: str) -> str:
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    return path


def write_csv(frame: pd.DataFrame, path: str, float_format: Optional[str] = None) -> str:
    """Write a DataFrame without its index."""
    float_format = float_format or get_config().CSV_FLOAT_FORMAT
    frame.to_csv(ensure_dir(path), index=False, float_format=float_format, lineterminator='\n')
    logger.info(f"Wrote {len(frame)} rows to {path}")
    return path


def write_jsonl(records: Iterable[Dict[str, Any]], path: str) -> str:
    """One JSON object per line, keys in insertion order."""
    count = 0
    with open(ensure_dir(path), 'w', encoding='utf-8') as f:
        for record in records:
            f.write(json.dumps(record, separators=(',', ':')))
            f.write('\n')
            count += 1
    logger.info(f"Wrote {count} records to {path}")
    return path
