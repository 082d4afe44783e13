"""Small shared numeric kernels. Rosters are tiny, so plain Python beats vectorising."""

from __future__ import annotations

import math
from datetime import datetime
from typing import Iterable, Sequence


def mean(values: Sequence[float]) -> float:
    return sum(values) / len(values)


def pstdev(values: Sequence[float]) -> float:
    m = mean(values)
    return math.sqrt(sum((v - m) ** 2 for v in values) / len(values))


def normalized_entropy(counts: Iterable[float], denominator_classes: int | None = None) -> float:
    """Shannon entropy of a count distribution, scaled to [0, 1].

    Normalised by log of ``denominator_classes`` when given, otherwise by log of the
    number of classes with non-zero count. Degenerate supports (one class or fewer)
    score 0.
    """
    positive = [c for c in counts if c > 0]
    total = sum(positive)
    if total <= 0 or len(positive) < 1:
        return 0.0
    k = denominator_classes if denominator_classes is not None else len(positive)
    if k <= 1:
        return 1.0 if denominator_classes is not None and positive else 0.0
    entropy = -sum((c / total) * math.log(c / total) for c in positive)
    value = entropy / math.log(k)
    return min(1.0, max(0.0, value))


def weighted_skew(positions: Sequence[float], weights: Sequence[float]) -> float:
    """Third standardized moment of a weighted distribution; 0 when degenerate.

    Requires at least three observations; all-zero weights fall back to equal ones.
    """
    if len(positions) < 3:
        return 0.0
    ws = list(weights)
    if sum(ws) <= 0:
        ws = [1.0] * len(positions)
    total = sum(ws)
    mu = sum(w * p for w, p in zip(ws, positions)) / total
    var = sum(w * (p - mu) ** 2 for w, p in zip(ws, positions)) / total
    if var <= 1e-18:
        return 0.0
    third = sum(w * (p - mu) ** 3 for w, p in zip(ws, positions)) / total
    return third / var ** 1.5


def interval_union_hours(intervals: Iterable[tuple[datetime, datetime]]) -> float:
    """Total length in hours covered by a union of (start, end) intervals."""
    spans = sorted((s, e) for s, e in intervals if e > s)
    total = 0.0
    cur_start: datetime | None = None
    cur_end: datetime | None = None
    for s, e in spans:
        if cur_end is None or s > cur_end:
            if cur_end is not None and cur_start is not None:
                total += (cur_end - cur_start).total_seconds()
            cur_start, cur_end = s, e
        elif e > cur_end:
            cur_end = e
    if cur_end is not None and cur_start is not None:
        total += (cur_end - cur_start).total_seconds()
    return total / 3600.0


def cosine(a: Sequence[float], b: Sequence[float]) -> float:
    na = math.sqrt(sum(x * x for x in a))
    nb = math.sqrt(sum(x * x for x in b))
    if na == 0.0 or nb == 0.0:
        return 0.0
    return sum(x * y for x, y in zip(a, b)) / (na * nb)


def mapped_cosine(raw: float) -> float:
    """Affine map from cosine in [-1, 1] to a similarity in [0, 1]."""
    return min(1.0, max(0.0, (raw + 1.0) / 2.0))
