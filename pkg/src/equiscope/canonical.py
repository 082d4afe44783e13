"""Canonical JSON serialisation: sorted keys, compact separators, floats at 9 significant digits.

Every persisted report, metric table and golden fixture goes through this module so
that identical inputs always produce byte-identical output.
"""

from __future__ import annotations

import json
import math
from typing import Any

SIG_DIGITS = 9


def round_sig(x: float, digits: int = SIG_DIGITS) -> float:
    """Round to `digits` significant digits. Rejects non-finite values."""
    if not math.isfinite(x):
        raise ValueError(f"non-finite value in canonical output: {x!r}")
    if x == 0.0:
        return 0.0  # normalises -0.0 as well
    return float(f"{x:.{digits}g}")


def _transform(obj: Any) -> Any:
    if isinstance(obj, float):
        return round_sig(obj)
    if isinstance(obj, dict):
        return {str(k): _transform(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_transform(v) for v in obj]
    if obj is None or isinstance(obj, (str, int, bool)):
        return obj
    raise TypeError(f"not canonically serialisable: {type(obj).__name__}")


def canonical_json(obj: Any) -> str:
    return json.dumps(_transform(obj), sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def canonical_bytes(obj: Any) -> bytes:
    return canonical_json(obj).encode("utf-8")
