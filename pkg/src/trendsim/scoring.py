"""Daily mean similarity scoring.

Method "word": embed the day's top-N frequent words and average their
cosine similarity to a target word's vector. Method "sentence": the same
average over every sentence of the day's corpus. By default the mean
divides by the number of successfully embedded items and the miss rate is
surfaced as coverage; ``strict_denominator`` restores the literal
divide-by-N behaviour.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from datetime import date
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import _kernels
from .lexical import FrequencyTable, SentenceList, top_n

METHOD_WORD = "word"
METHOD_SENTENCE = "sentence"

ROLE_SUBJECT = "subject"
ROLE_CONTROL = "control"


@dataclass
class TargetWord:
    label: str
    vector: np.ndarray
    role: str = ROLE_SUBJECT

    def __post_init__(self):
        if self.role not in (ROLE_SUBJECT, ROLE_CONTROL):
            raise ValueError(f"unknown target role {self.role!r}")


@dataclass
class DailyScore:
    """One (day, target, method) observation; ``score is None`` marks an
    EMPTY record (nothing could be embedded that day)."""

    day: date
    target: str
    method: str
    score: float | None
    items_embedded: int
    items_considered: int

    @property
    def empty(self) -> bool:
        return self.score is None

    @property
    def coverage(self) -> float:
        if self.items_considered == 0:
            return 0.0
        return self.items_embedded / self.items_considered


@dataclass
class SimilarityMatrix:
    labels: list[str]
    cells: np.ndarray  # square, symmetric, unit diagonal

    def value(self, a: str, b: str) -> float:
        return float(self.cells[self.labels.index(a), self.labels.index(b)])


def cosine(a: np.ndarray, b: np.ndarray) -> float:
    """dot(a, b) / (|a| * |b|), accumulated in 64-bit floats."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.ndim != 1 or b.ndim != 1 or a.shape[0] != b.shape[0]:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    na = float(np.sqrt(a @ a))
    nb = float(np.sqrt(b @ b))
    if na == 0.0 or nb == 0.0:
        raise ValueError("cosine of a zero-norm vector is undefined")
    return float((a @ b) / (na * nb))


def _mean_score(
    rows: list[np.ndarray],
    weights: list[float],
    target: TargetWord,
    denominator: float,
) -> float:
    mat = _kernels.as_kernel_matrix(rows)
    w = np.asarray(weights, dtype=np.float64)
    t = np.ascontiguousarray(target.vector, dtype=np.float64)
    return _kernels.cosine_sum(mat, w, t) / denominator


def dmss_word(
    table: FrequencyTable,
    n: int,
    target: TargetWord,
    backend,
    strict_denominator: bool = False,
    weighted: bool = False,
) -> DailyScore:
    """Daily mean similarity score over the top-``n`` frequent words.

    The unweighted mean over unique top-N words is the default;
    ``weighted=True`` weights each word by its frequency. With
    ``strict_denominator`` the divisor is ``n`` (weighted: the full weight
    of the selection) even when words are missing from the vocabulary.
    """
    words = top_n(table, n)
    rows: list[np.ndarray] = []
    weights: list[float] = []
    embedded = 0
    for word in words:
        res = backend.embed_word(word)
        if res.miss:
            continue
        embedded += 1
        rows.append(res.vector)
        weights.append(float(table.counts[word]) if weighted else 1.0)
    score = None
    if embedded:
        if weighted:
            denom = (
                float(sum(table.counts[w] for w in words))
                if strict_denominator
                else float(sum(weights))
            )
        else:
            denom = float(n) if strict_denominator else float(embedded)
        score = _mean_score(rows, weights, target, denom)
    return DailyScore(
        day=table.day,
        target=target.label,
        method=METHOD_WORD,
        score=score,
        items_embedded=embedded,
        items_considered=len(words),
    )


def dmss_sentence(
    sentences: SentenceList,
    target: TargetWord,
    backend,
    strict_denominator: bool = False,
) -> DailyScore:
    """Daily mean similarity score over every sentence of the day.

    Duplicate sentences each count in the mean but hit the embedding cache;
    internally they are grouped and weighted by multiplicity.
    """
    considered = len(sentences.sentences)
    multiplicity = Counter(sentences.sentences)
    rows: list[np.ndarray] = []
    weights: list[float] = []
    embedded = 0
    for sentence in sorted(multiplicity):
        res = backend.embed_sentence(sentence)
        if res.miss:
            continue
        count = multiplicity[sentence]
        embedded += count
        rows.append(res.vector)
        weights.append(float(count))
    score = None
    if embedded:
        denom = float(considered) if strict_denominator else float(embedded)
        score = _mean_score(rows, weights, target, denom)
    return DailyScore(
        day=sentences.day,
        target=target.label,
        method=METHOD_SENTENCE,
        score=score,
        items_embedded=embedded,
        items_considered=considered,
    )


def target_similarity_matrix(targets: Sequence[TargetWord]) -> SimilarityMatrix:
    """Pairwise cosine similarity between target vectors (Figure-3 style)."""
    if len(targets) < 2:
        raise ValueError("need at least 2 targets for a similarity matrix")
    labels = [t.label for t in targets]
    if len(set(labels)) != len(labels):
        raise ValueError("duplicate target labels")
    k = len(targets)
    cells = np.eye(k, dtype=np.float64)
    for i in range(k):
        for j in range(i + 1, k):
            c = cosine(targets[i].vector, targets[j].vector)
            cells[i, j] = c
            cells[j, i] = c
    return SimilarityMatrix(labels=labels, cells=cells)


def per_day_new_items(
    items_by_day: Mapping[date, Iterable[str]], already_embedded: set[str] | None = None
) -> dict[date, int]:
    """Embedding-invocation accounting: walking days in date order, count
    the items of each day not embedded on any earlier day.

    Equals the cache-miss count of a sequential date-ordered run, and is
    independent of how the actual execution was parallelized.
    """
    seen: set[str] = set(already_embedded or ())
    out: dict[date, int] = {}
    for day in sorted(items_by_day):
        fresh = 0
        for item in items_by_day[day]:
            if item not in seen:
                seen.add(item)
                fresh += 1
        out[day] = fresh
    return out
