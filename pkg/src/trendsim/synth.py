"""Seeded synthetic corpora and clustered lexicons for offline testing.

Reproduces the qualitative setup the acceptance suite needs: a vocabulary
with one semantic cluster that spikes inside a date window (the "area of
interest") and an unrelated control cluster that stays flat. All outputs
are byte-deterministic per seed and are valid inputs to the ingest and
lexicon loaders without special-casing.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from datetime import date, timedelta

import numpy as np

from .backends import Lexicon
from .errors import InputError

_EMOJIS = ("\U0001F600", "\U0001F525", "\U0001F30D", "\U0001F680", "\U0001F914", "\U0001FAE1")
_MAX_GEOMETRY_ATTEMPTS = 200


@dataclass
class ClusterSpec:
    name: str
    tokens: list[str]


def _default_clusters() -> list[ClusterSpec]:
    return [
        ClusterSpec(
            "conflict",
            ["war", "peace", "conflict", "battle", "soldier", "ceasefire", "troops", "frontline"],
        ),
        ClusterSpec(
            "tech",
            ["computer", "software", "keyboard", "laptop", "server", "screen"],
        ),
    ]


@dataclass
class SynthSpec:
    seed: int = 42
    days: int = 30
    tweets_per_day: int = 200
    vocab_size: int = 400
    dim: int = 16
    clusters: list[ClusterSpec] = field(default_factory=_default_clusters)
    intra_cosine: float = 0.7
    inter_cosine: float = 0.3
    spike_cluster: str = "conflict"
    spike_start: int = 10  # 1-based day index, inclusive
    spike_end: int = 15
    injection_rate: float = 0.5
    noise_rate: float = 0.2
    min_tokens: int = 8
    max_tokens: int = 14
    start_date: date = date(2020, 7, 1)

    def validate(self) -> None:
        if self.days < 1 or self.tweets_per_day < 1:
            raise InputError("days and tweets_per_day must be >= 1")
        if self.vocab_size < 1 or self.dim < 1:
            raise InputError("vocab_size and dim must be >= 1")
        if not 0.0 <= self.injection_rate <= 1.0:
            raise InputError("injection_rate must be in [0, 1]")
        if not 0.0 <= self.noise_rate <= 1.0:
            raise InputError("noise_rate must be in [0, 1]")
        if not 1 <= self.min_tokens <= self.max_tokens:
            raise InputError("need 1 <= min_tokens <= max_tokens")
        if not -1.0 <= self.inter_cosine < self.intra_cosine <= 1.0:
            raise InputError("need inter_cosine < intra_cosine within [-1, 1]")
        seen: set[str] = set()
        for cluster in self.clusters:
            if not cluster.tokens:
                raise InputError(f"cluster {cluster.name!r} has no tokens")
            for tok in cluster.tokens:
                if tok != tok.lower() or len(tok) < 2:
                    raise InputError(f"bad cluster token {tok!r}")
                if tok in seen:
                    raise InputError(f"clusters are not disjoint: {tok!r}")
                seen.add(tok)
        if self.injection_rate > 0:
            if self.spike_cluster not in {c.name for c in self.clusters}:
                raise InputError(f"spike cluster {self.spike_cluster!r} not defined")
            if not 1 <= self.spike_start <= self.spike_end <= self.days:
                raise InputError(
                    f"spike window [{self.spike_start}, {self.spike_end}] "
                    f"outside [1, {self.days}]"
                )

    def background_tokens(self) -> list[str]:
        return [f"w{i:04d}" for i in range(self.vocab_size)]


def _unit(vec: np.ndarray) -> np.ndarray:
    return vec / np.linalg.norm(vec)


def _round_to_file_precision(vec: np.ndarray) -> np.ndarray:
    # Bounds are verified on the exact values a reader of the file will see.
    return np.array([float(f"{c:.8f}") for c in vec], dtype=np.float64)


def _cluster_bounds_hold(
    members: dict[str, np.ndarray], clusters: list[ClusterSpec], intra: float, inter: float
) -> bool:
    def cos(a, b):
        return float(a @ b / (np.linalg.norm(a) * np.linalg.norm(b)))

    for ci, cluster in enumerate(clusters):
        toks = cluster.tokens
        for i in range(len(toks)):
            for j in range(i + 1, len(toks)):
                if cos(members[toks[i]], members[toks[j]]) < intra:
                    return False
        for other in clusters[ci + 1 :]:
            for a in toks:
                for b in other.tokens:
                    if cos(members[a], members[b]) > inter:
                        return False
    return True


def _sample_cluster_vectors(spec: SynthSpec, rng: np.random.Generator) -> dict[str, np.ndarray]:
    if spec.dim < 2 and len(spec.clusters) >= 2:
        raise InputError(
            "cluster geometry infeasible: 1-D vectors admit only sign structure, "
            "cannot hold multiple clusters within the cosine bounds"
        )
    # Centroids are kept near-orthogonal (well inside the inter-cluster
    # bound, so the control cluster stays flat when another cluster spikes);
    # members get a small isotropic perturbation. Bounds are re-verified on
    # the rounded vectors, with bounded resampling.
    centroid_margin = min(0.04, max(spec.inter_cosine / 2.0, 0.02))
    eps = 0.22 / math.sqrt(spec.dim)
    for _ in range(_MAX_GEOMETRY_ATTEMPTS):
        centroids: list[np.ndarray] = []
        feasible = True
        for _ in spec.clusters:
            for _ in range(500):
                cand = _unit(rng.standard_normal(spec.dim))
                if all(abs(float(cand @ c)) <= centroid_margin for c in centroids):
                    centroids.append(cand)
                    break
            else:
                feasible = False
                break
        if not feasible:
            continue
        members: dict[str, np.ndarray] = {}
        degenerate = False
        for ci, (cluster, centroid) in enumerate(zip(spec.clusters, centroids)):
            others = [c for cj, c in enumerate(centroids) if cj != ci]
            # Zero-mean noise within the cluster and nulled components along
            # the other clusters' centroids: a spike in one cluster then has
            # no systematic pull on another cluster's scores — the control
            # stays flat by construction, not by luck of the seed.
            noise = eps * rng.standard_normal((len(cluster.tokens), spec.dim))
            noise -= noise.mean(axis=0)
            for tok, n_vec in zip(cluster.tokens, noise):
                raw = centroid + n_vec
                for other in others:
                    raw = raw - float(raw @ other) * other
                norm = float(np.linalg.norm(raw))
                if norm < 0.1:
                    degenerate = True
                    break
                members[tok] = _round_to_file_precision(raw / norm)
            if degenerate:
                break
        if degenerate:
            continue
        if _cluster_bounds_hold(members, spec.clusters, spec.intra_cosine, spec.inter_cosine):
            return members
    raise InputError(
        f"could not satisfy cluster cosine bounds (intra >= {spec.intra_cosine}, "
        f"inter <= {spec.inter_cosine}) in dim {spec.dim} after "
        f"{_MAX_GEOMETRY_ATTEMPTS} attempts; geometry looks infeasible"
    )


def generate_lexicon(spec: SynthSpec, path) -> None:
    """Write a clustered lexicon file: cluster members satisfy the pairwise
    intra/inter cosine bounds, background tokens get random unit vectors."""
    spec.validate()
    rng = np.random.default_rng([spec.seed, 0])
    vectors = _sample_cluster_vectors(spec, rng)
    # Background vectors come in antipodal pairs (u, -u), so the background
    # as a whole has no net direction: scores against it hover around zero
    # and a spike elsewhere cannot shift a control target by dilution.
    background = spec.background_tokens()
    for i in range(0, len(background), 2):
        unit = _unit(rng.standard_normal(spec.dim))
        vectors[background[i]] = _round_to_file_precision(unit)
        if i + 1 < len(background):
            vectors[background[i + 1]] = _round_to_file_precision(-unit)
    lines = [f"{len(vectors)} {spec.dim}"]
    for tok, vec in vectors.items():
        lines.append(tok + " " + " ".join(f"{c:.8f}" for c in vec))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _noise_fragment(rng: np.random.Generator) -> str:
    kind = int(rng.integers(0, 4))
    tag = int(rng.integers(0, 100000))
    if kind == 0:
        return f"https://t.co/x{tag}"
    if kind == 1:
        return f"@user{tag}"
    if kind == 2:
        return f"#topic{tag}"
    return _EMOJIS[int(rng.integers(0, len(_EMOJIS)))]


def _assemble_text(words: list[str], rng: np.random.Generator) -> str:
    sentences = []
    i = 0
    while i < len(words):
        size = int(rng.integers(3, 7))
        chunk = words[i : i + size]
        i += size
        roll = rng.random()
        term = "." if roll < 0.7 else ("!" if roll < 0.85 else "?")
        sentences.append(" ".join(chunk) + term)
    return " ".join(sentences)


def generate_corpus(spec: SynthSpec, path, lexicon: Lexicon | None = None) -> None:
    """Write a JSONL corpus: baseline tweets sample the non-spike vocabulary
    uniformly; inside the spike window each tweet independently picks up
    spike-cluster tokens at the injection rate. Light URL/mention/hashtag/
    emoji noise exercises the cleaning stage.
    """
    spec.validate()
    spike_tokens = []
    baseline: list[str] = list(spec.background_tokens())
    for cluster in spec.clusters:
        if cluster.name == spec.spike_cluster:
            spike_tokens = list(cluster.tokens)
        else:
            baseline.extend(cluster.tokens)
    if lexicon is not None:
        missing = [t for t in spike_tokens + baseline if t not in lexicon.entries]
        if missing:
            raise InputError(f"lexicon does not cover corpus tokens: {missing[:5]}")

    rng = np.random.default_rng([spec.seed, 1])
    serial = 0
    lines: list[str] = []
    for d in range(spec.days):
        day = spec.start_date + timedelta(days=d)
        in_window = spec.spike_start <= d + 1 <= spec.spike_end
        for _ in range(spec.tweets_per_day):
            k = int(rng.integers(spec.min_tokens, spec.max_tokens + 1))
            idx = rng.integers(0, len(baseline), size=k)
            words = [baseline[int(i)] for i in idx]
            if in_window and spec.injection_rate > 0 and rng.random() < spec.injection_rate:
                m = int(rng.integers(2, 5))
                extra = [spike_tokens[int(i)] for i in rng.integers(0, len(spike_tokens), size=m)]
                words += extra
                perm = rng.permutation(len(words))
                words = [words[int(p)] for p in perm]
            if spec.noise_rate > 0 and rng.random() < spec.noise_rate:
                pos = int(rng.integers(0, len(words) + 1))
                words.insert(pos, _noise_fragment(rng))
            text = _assemble_text(words, rng)
            offset = int(rng.integers(0, 86400))
            ts = (
                f"{day.isoformat()}T{offset // 3600:02d}:"
                f"{offset % 3600 // 60:02d}:{offset % 60:02d}Z"
            )
            serial += 1
            lines.append(
                json.dumps(
                    {"id": f"t{serial:07d}", "created_at": ts, "lang": "en", "text": text},
                    ensure_ascii=False,
                )
            )
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
