"""Deterministic CSV / JSON emission.

CSV: header row, ``,`` separator, ``\\n`` line endings, floats with 17
significant digits, non-finite values as ``inf`` / ``-inf`` / ``nan``,
booleans as ``0`` / ``1``.  JSON keeps insertion order and renders
non-finite floats as the same strings.
"""
from __future__ import annotations

import json
import math

import numpy as np


def format_value(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def to_csv(columns: list, rows) -> str:
    lines = [",".join(columns)]
    lines.extend(",".join(format_value(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    return obj


def to_json(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2, allow_nan=False) + "\n"


def columns_to_rows(table: dict) -> tuple:
    """Split an ordered ``{name: sequence}`` mapping into (columns, rows)."""
    names = list(table)
    return names, zip(*(table[k] for k in names))
