"""Canonical JSON and atomic file output shared by the command line."""

from __future__ import annotations

import json
import math
import os
import tempfile
from fractions import Fraction
from typing import Any

import numpy as np

from .mass import MassFunction

SIGNIFICANT_DIGITS = 12


def _round(x: float) -> float | int:
    if not math.isfinite(x):
        raise ValueError(f"non-finite number {x!r} cannot be written as JSON")
    if x == 0:
        return 0.0
    return float(f"{x:.{SIGNIFICANT_DIGITS}g}")


def canonical(obj: Any) -> Any:
    """Plain JSON types with numbers rounded to a fixed precision."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int | np.integer):
        return int(obj)
    if isinstance(obj, float | Fraction | np.floating):
        return _round(float(obj))
    if isinstance(obj, MassFunction):
        return canonical(obj.to_dict())
    if isinstance(obj, np.ndarray):
        return canonical(obj.tolist())
    if isinstance(obj, dict):
        return {str(k): canonical(v) for k, v in obj.items()}
    if isinstance(obj, list | tuple):
        return [canonical(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj: Any) -> str:
    return json.dumps(canonical(obj), sort_keys=True, indent=2) + "\n"


def write_atomic(path: str, text: str) -> None:
    """Write through a temporary file in the target directory, then rename."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_json(path: str) -> Any:
    with open(path, encoding="utf-8") as handle:
        return json.load(handle)
