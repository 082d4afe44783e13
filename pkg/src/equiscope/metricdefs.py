"""Registry of per-student metrics: identifiers, orientation, and aggregation behaviour.

Identifiers follow the three evidence families: submission (1a..1i), conversation
(2a..2i), coordination (3a..3f), plus derived metrics that feed specific benchmarks.
Orientation is fixed per metric. Signed informational metrics (1f, 3b) are folded to
their absolute value and treated lower-better when aggregated. Sentiment is shifted
to a non-negative scale before normalisation.

``zero_support`` controls what normalisation does with a student who has no
supporting evidence for a lower-better metric:

    keep      the stored value already encodes the convention (e.g. maximal gap)
    team_mean the stored 0 would read as a perfect score, so substitute the team
              mean of supported values (neutral, never rewards missing evidence)
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class Orientation(str, Enum):
    HIGHER = "higher-better"
    LOWER = "lower-better"


@dataclass(frozen=True)
class MetricDef:
    id: str
    label: str
    orientation: Orientation
    fold_abs: bool = False
    shift: float = 0.0
    zero_support: str = "keep"


_DEFS = [
    # Submission
    MetricDef("1a", "commit count", Orientation.HIGHER),
    MetricDef("1b", "net code lines", Orientation.HIGHER),
    MetricDef("1c", "word count", Orientation.HIGHER),
    MetricDef("1d", "character count", Orientation.HIGHER),
    MetricDef("1e", "mean inter-commit interval (h)", Orientation.LOWER),
    MetricDef("1f", "weighted commit-time skew", Orientation.LOWER, fold_abs=True),
    MetricDef("1g", "code standard", Orientation.HIGHER),
    MetricDef("1h", "text complexity (reading ease)", Orientation.HIGHER),
    MetricDef("1i", "media workload", Orientation.HIGHER),
    # Conversation
    MetricDef("2a", "messages sent", Orientation.HIGHER),
    MetricDef("2b", "mean characters per message", Orientation.HIGHER),
    MetricDef("2c", "send/receive ratio", Orientation.HIGHER),
    MetricDef("2d", "mean response latency (min)", Orientation.LOWER, zero_support="team_mean"),
    MetricDef("2e", "mean interval between sends (h)", Orientation.LOWER),
    MetricDef("2f", "longest silence (h)", Orientation.LOWER),
    MetricDef("2g", "message readability", Orientation.HIGHER),
    MetricDef("2h", "interaction diversity", Orientation.HIGHER),
    MetricDef("2i", "sentiment", Orientation.HIGHER, shift=1.0),
    # Coordination
    MetricDef("3a", "meeting attendance fraction", Orientation.HIGHER),
    MetricDef("3b", "attendance skew", Orientation.LOWER, fold_abs=True),
    MetricDef("3c", "meeting minutes attended", Orientation.HIGHER),
    MetricDef("3d", "task fidelity", Orientation.HIGHER),
    MetricDef("3e", "assignment fidelity", Orientation.HIGHER),
    MetricDef("3f", "task diversity", Orientation.HIGHER),
    # Derived
    MetricDef("commit_msg_readability", "commit message readability", Orientation.HIGHER),
    MetricDef("deadline_adherence", "tasks done by their due date", Orientation.HIGHER),
    MetricDef("admin_task_share", "share of the team's admin tasks", Orientation.HIGHER),
    MetricDef("quality_grade", "rubric quality grade", Orientation.HIGHER),
    MetricDef("relevance_llm", "output relevance to expected deliverables", Orientation.HIGHER),
]

REGISTRY: dict[str, MetricDef] = {d.id: d for d in _DEFS}

PA_METRIC_PREFIX = "pa_"


def metric_def(metric_id: str) -> MetricDef:
    """Look up a metric definition; peer-assessment metrics are registered dynamically."""
    if metric_id.startswith(PA_METRIC_PREFIX):
        return MetricDef(metric_id, f"peer assessment ({metric_id[len(PA_METRIC_PREFIX):]})", Orientation.HIGHER)
    try:
        return REGISTRY[metric_id]
    except KeyError:
        raise KeyError(f"unknown metric id: {metric_id!r}") from None


def is_known_metric(metric_id: str) -> bool:
    return metric_id in REGISTRY or metric_id.startswith(PA_METRIC_PREFIX)
