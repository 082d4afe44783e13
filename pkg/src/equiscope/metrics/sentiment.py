"""Message sentiment scoring against the bundled signed lexicon.

Per message, the score is the valence sum over matched tokens normalised by the sum
of their absolute valences, so a message containing only positive tokens scores +1
and only negative tokens -1. Messages with no matched token score 0. The analyzer is
pluggable so a model-backed scorer can replace the lexicon.
"""

from __future__ import annotations

import re
from importlib import resources
from pathlib import Path
from typing import Iterable, Protocol

_TOKEN_RE = re.compile(r"[a-z']+")


class SentimentAnalyzer(Protocol):
    def score_message(self, text: str) -> float:
        """Valence in [-1, 1] for one message."""
        ...


def load_lexicon(path: Path | None = None) -> dict[str, float]:
    """Read `token<TAB>valence` lines; valences outside [-1, 1] are clamped."""
    if path is not None:
        raw = Path(path).read_text(encoding="utf-8")
    else:
        raw = resources.files("equiscope.data").joinpath("lexicon.tsv").read_text(encoding="utf-8")
    lexicon: dict[str, float] = {}
    for line in raw.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        token, _, valence = line.partition("\t")
        lexicon[token.strip().lower()] = max(-1.0, min(1.0, float(valence)))
    return lexicon


class LexiconAnalyzer:
    def __init__(self, lexicon: dict[str, float] | None = None):
        self.lexicon = lexicon if lexicon is not None else load_lexicon()

    def score_message(self, text: str) -> float:
        total = 0.0
        weight = 0.0
        for token in _TOKEN_RE.findall(text.lower()):
            valence = self.lexicon.get(token)
            if valence is None:
                continue
            total += valence
            weight += abs(valence)
        if weight == 0.0:
            return 0.0
        return total / weight


def sentiment_score(texts: Iterable[str], analyzer: SentimentAnalyzer | None = None) -> tuple[float, int]:
    """Mean per-message valence and the number of messages scored."""
    analyzer = analyzer or LexiconAnalyzer()
    scores = [analyzer.score_message(t) for t in texts]
    if not scores:
        return 0.0, 0
    return sum(scores) / len(scores), len(scores)
