"""Tokenization, stopword removal, per-day frequency tables, top-N word
selection and sentence splitting.

Tokens are lowercase, at least 2 characters, contain at least one letter,
and may carry internal apostrophes ("don't"). Sentences are split on runs
of ``. ! ?`` and never span two tweets; fragments shorter than 3 characters
after trimming are dropped.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from datetime import date
from importlib import resources
from pathlib import Path

from .cleaning import CleanText
from .errors import InputError

# Letters/digits (no underscore) with optional internal apostrophes.
_TOKEN_RE = re.compile(r"[^\W_]+(?:'[^\W_]+)*")
_SENTENCE_BOUNDARY_RE = re.compile(r"[.!?]+")

MIN_TOKEN_LEN = 2
MIN_SENTENCE_LEN = 3


@dataclass
class FrequencyTable:
    day: date
    counts: dict[str, int] = field(default_factory=dict)

    @property
    def total_tokens(self) -> int:
        return sum(self.counts.values())


@dataclass
class SentenceList:
    day: date
    sentences: list[str] = field(default_factory=list)


def tokenize(text: str) -> list[str]:
    """Split cleaned text into lowercase tokens.

    Splits on anything that is not a letter, digit or internal apostrophe;
    drops tokens shorter than 2 characters or without a letter.
    """
    out = []
    for tok in _TOKEN_RE.findall(text.lower()):
        if len(tok) >= MIN_TOKEN_LEN and any(c.isalpha() for c in tok):
            out.append(tok)
    return out


def build_frequency_table(
    day: date, cleaned: list[CleanText], stopwords: set[str]
) -> FrequencyTable:
    """Aggregate token counts for one day, excluding stopwords."""
    counter: Counter[str] = Counter()
    for ct in cleaned:
        counter.update(tokenize(ct.text))
    for sw in stopwords:
        counter.pop(sw, None)
    return FrequencyTable(day=day, counts=dict(counter))


def top_n(table: FrequencyTable, n: int) -> list[str]:
    """The ``min(n, distinct)`` most frequent tokens.

    Sorted by count descending, ties broken by token text ascending, so the
    ranking is deterministic and prefix-stable in ``n``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    ranked = sorted(table.counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return [tok for tok, _ in ranked[:n]]


def split_sentences(cleaned: list[CleanText], day: date) -> SentenceList:
    """Split each tweet's cleaned text into sentences at ``. ! ?`` runs.

    No sentence spans two tweets; fragments shorter than 3 characters after
    trimming are dropped.
    """
    sentences: list[str] = []
    for ct in cleaned:
        for frag in _SENTENCE_BOUNDARY_RE.split(ct.text):
            frag = frag.strip()
            if len(frag) >= MIN_SENTENCE_LEN:
                sentences.append(frag)
    return SentenceList(day=day, sentences=sentences)


def load_stopwords(path: str | Path | None = None) -> set[str]:
    """Load a stopword set: one lowercase word per line, ``#`` comments.

    With no path, the packaged default English list is used.
    """
    if path is None:
        text = (
            resources.files("trendsim").joinpath("data/stopwords_en.txt").read_text("utf-8")
        )
    else:
        p = Path(path)
        try:
            text = p.read_text("utf-8")
        except OSError as exc:
            raise InputError(f"cannot read stopword file {p}: {exc}") from exc
    words = set()
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.add(line.lower())
    return words
