"""Directly computable per-student metrics over an evidence bundle."""

from .conversation import conversation_metrics
from .coordination import coordination_metrics
from .readability import flesch_reading_ease, text_readability
from .sentiment import LexiconAnalyzer, load_lexicon, sentiment_score
from .submission import MediaWeights, submission_metrics
from .table import MetricTable, MetricValue

__all__ = [
    "LexiconAnalyzer",
    "MediaWeights",
    "MetricTable",
    "MetricValue",
    "conversation_metrics",
    "coordination_metrics",
    "flesch_reading_ease",
    "load_lexicon",
    "sentiment_score",
    "submission_metrics",
    "text_readability",
]
