"""Flesch reading-ease scoring with a deterministic desk-scale syllable heuristic."""

from __future__ import annotations

import re

_WORD_RE = re.compile(r"[A-Za-z]+(?:'[A-Za-z]+)?")
_SENTENCE_SPLIT_RE = re.compile(r"[.!?]+")
_VOWEL_GROUP_RE = re.compile(r"[aeiouy]+")


def words(text: str) -> list[str]:
    return _WORD_RE.findall(text)


def sentence_count(text: str) -> int:
    chunks = _SENTENCE_SPLIT_RE.split(text)
    n = sum(1 for c in chunks if _WORD_RE.search(c))
    return max(n, 1)


def syllables(word: str) -> int:
    """Count vowel groups, discount a silent trailing 'e', minimum one per word."""
    w = word.lower()
    groups = _VOWEL_GROUP_RE.findall(w)
    count = len(groups)
    if count > 1 and w.endswith("e") and not w.endswith(("le", "ee")):
        count -= 1
    return max(count, 1)


def flesch_reading_ease(text: str) -> float:
    """206.835 - 1.015*(words/sentences) - 84.6*(syllables/words); empty text scores 0."""
    ws = words(text)
    if not ws:
        return 0.0
    n_words = len(ws)
    n_sentences = sentence_count(text)
    n_syllables = sum(syllables(w) for w in ws)
    return 206.835 - 1.015 * (n_words / n_sentences) - 84.6 * (n_syllables / n_words)


def text_readability(body: str) -> float:
    """Public readability entry point used by the metric passes."""
    return flesch_reading_ease(body)
