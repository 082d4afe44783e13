"""Per-student metric value table with orientation flags and canonical serialisation."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Iterable

from ..canonical import canonical_json
from ..metricdefs import metric_def


@dataclass
class MetricValue:
    metric_id: str
    student: str
    value: float
    support: int

    def __post_init__(self) -> None:
        if not math.isfinite(self.value):
            raise ValueError(f"metric {self.metric_id} for {self.student}: non-finite value")
        if self.support < 0:
            raise ValueError(f"metric {self.metric_id} for {self.student}: negative support")

    @property
    def orientation(self) -> str:
        return metric_def(self.metric_id).orientation.value


@dataclass
class MetricTable:
    """metric_id -> student -> MetricValue. Every roster student gets a cell for every
    computed metric (value 0, support 0 when there is no evidence)."""

    roster: list[str]
    cells: dict[str, dict[str, MetricValue]] = field(default_factory=dict)

    def put(self, metric_id: str, student: str, value: float, support: int) -> None:
        self.cells.setdefault(metric_id, {})[student] = MetricValue(metric_id, student, value, support)

    def set_column(self, metric_id: str, values: dict[str, float], supports: dict[str, int]) -> None:
        """Install a full column, zero-filling roster students without evidence."""
        for student in self.roster:
            self.put(metric_id, student, values.get(student, 0.0), supports.get(student, 0))

    def value(self, metric_id: str, student: str) -> float:
        return self.cells[metric_id][student].value

    def support(self, metric_id: str, student: str) -> int:
        return self.cells[metric_id][student].support

    def column(self, metric_id: str) -> dict[str, float]:
        return {s: self.cells[metric_id][s].value for s in self.roster}

    def has_metric(self, metric_id: str) -> bool:
        return metric_id in self.cells

    def available(self, metric_id: str) -> bool:
        """A metric column is usable when at least one student has supporting evidence."""
        col = self.cells.get(metric_id)
        if not col:
            return False
        return any(v.support > 0 for v in col.values())

    def metric_ids(self) -> list[str]:
        return sorted(self.cells)

    def merge(self, other: "MetricTable") -> None:
        for metric_id, col in other.cells.items():
            for student, mv in col.items():
                self.put(metric_id, student, mv.value, mv.support)

    def update(self, columns: Iterable[tuple[str, dict[str, float], dict[str, int]]]) -> None:
        for metric_id, values, supports in columns:
            self.set_column(metric_id, values, supports)

    def to_dict(self) -> dict[str, Any]:
        return {
            mid: {
                s: {
                    "value": col[s].value,
                    "support": col[s].support,
                    "orientation": col[s].orientation,
                }
                for s in self.roster
                if s in col
            }
            for mid, col in sorted(self.cells.items())
        }

    def canonical(self) -> str:
        return canonical_json(self.to_dict())
