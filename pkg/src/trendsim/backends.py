"""Embedding backends behind one interface: an offline flat-file lexicon
and a remote HTTP embedding service, plus a memoizing cache wrapper.

Lexicon file format: UTF-8 text, line 1 is ``<entry_count> <dim>``, each
following line is ``<token> <c1> ... <cdim>`` single-space separated with
decimal floating-point components.

Remote wire protocol: ``GET /info`` returns ``{model_id, dim}``;
``POST /embed`` with ``{"texts": [...]}`` returns
``{model_id, dim, vectors}``. Batches are chunked to the service cap.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import requests

from . import lexical
from .errors import BackendError, InputError

SOURCE_LEXICON = "lexicon"
SOURCE_COMPOSED = "composed"
SOURCE_REMOTE = "remote"

DEFAULT_TIMEOUT = 10.0
DEFAULT_RETRIES = 2
SERVICE_BATCH_CAP = 256


@dataclass
class EmbedResult:
    """An embedding lookup outcome; ``vector is None`` marks an OOV MISS."""

    vector: np.ndarray | None
    source: str

    @property
    def miss(self) -> bool:
        return self.vector is None


@dataclass
class Lexicon:
    dim: int
    entries: dict[str, np.ndarray]
    source: str

    def __len__(self) -> int:
        return len(self.entries)


def _check_vector(vec: np.ndarray, context: str) -> np.ndarray:
    if not np.all(np.isfinite(vec)):
        raise InputError(f"{context}: non-finite vector component")
    if not np.any(vec):
        raise InputError(f"{context}: all-zero vector")
    return vec


def load_lexicon(path: str | Path) -> Lexicon:
    """Parse a lexicon file, validating header counts, dimensions and
    per-vector invariants (finite, not all-zero, unique lowercase tokens)."""
    path = Path(path)
    try:
        fh = open(path, encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read lexicon file {path}: {exc}") from exc
    entries: dict[str, np.ndarray] = {}
    with fh:
        header = fh.readline()
        parts = header.split()
        if len(parts) != 2:
            raise InputError(f"{path}:1: expected header '<entry_count> <dim>'")
        try:
            expected_count, dim = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise InputError(f"{path}:1: non-integer header field") from exc
        if expected_count < 0 or dim < 1:
            raise InputError(f"{path}:1: invalid header values {expected_count} {dim}")
        for lineno, line in enumerate(fh, start=2):
            line = line.rstrip("\n")
            fields = line.split(" ")
            token = fields[0]
            if not token:
                raise InputError(f"{path}:{lineno}: empty token")
            if token != token.lower():
                raise InputError(f"{path}:{lineno}: token {token!r} is not lowercase")
            if token in entries:
                raise InputError(f"{path}:{lineno}: duplicate token {token!r}")
            if len(fields) - 1 != dim:
                raise InputError(
                    f"{path}:{lineno}: expected {dim} components, got {len(fields) - 1}"
                )
            try:
                vec = np.array([float(c) for c in fields[1:]], dtype=np.float64)
            except ValueError as exc:
                raise InputError(f"{path}:{lineno}: bad float component") from exc
            _check_vector(vec, f"{path}:{lineno}")
            vec.flags.writeable = False
            entries[token] = vec
    if len(entries) != expected_count:
        raise InputError(
            f"{path}: header promises {expected_count} entries, found {len(entries)}"
        )
    return Lexicon(dim=dim, entries=entries, source=str(path))


class LexiconBackend:
    """Offline backend: exact-match word lookup; sentences are composed as
    the mean of in-vocabulary token vectors (a documented approximation)."""

    def __init__(self, lexicon: Lexicon):
        self.lexicon = lexicon

    @property
    def dim(self) -> int:
        return self.lexicon.dim

    @property
    def model_id(self) -> str:
        return f"lexicon:{self.lexicon.source}"

    def embed_word(self, token: str) -> EmbedResult:
        vec = self.lexicon.entries.get(token)
        if vec is None:
            return EmbedResult(vector=None, source=SOURCE_LEXICON)
        return EmbedResult(vector=vec, source=SOURCE_LEXICON)

    def embed_sentence(self, sentence: str) -> EmbedResult:
        rows = []
        for tok in lexical.tokenize(sentence):
            vec = self.lexicon.entries.get(tok)
            if vec is not None:
                rows.append(vec)
        if not rows:
            return EmbedResult(vector=None, source=SOURCE_COMPOSED)
        mean = np.mean(np.stack(rows), axis=0)
        if float(np.linalg.norm(mean)) <= 1e-12:
            # token vectors cancelled out; a zero vector has no direction,
            # so the sentence cannot be scored
            return EmbedResult(vector=None, source=SOURCE_COMPOSED)
        mean.flags.writeable = False
        return EmbedResult(vector=mean, source=SOURCE_COMPOSED)


class RemoteBackend:
    """HTTP client for the embed-service wire protocol."""

    def __init__(
        self,
        base_url: str,
        timeout: float = DEFAULT_TIMEOUT,
        retries: int = DEFAULT_RETRIES,
        batch_cap: int = SERVICE_BATCH_CAP,
        session: requests.Session | None = None,
    ):
        self.base_url = base_url.rstrip("/")
        self.timeout = timeout
        self.retries = retries
        self.batch_cap = batch_cap
        self._session = session or requests.Session()
        self._info: dict | None = None
        # requests.Session is not guaranteed thread-safe; day workers may
        # share this backend, so HTTP traffic is serialized.
        self._http_lock = threading.Lock()

    def info(self) -> dict:
        if self._info is None:
            payload = self._request("GET", "/info")
            if not isinstance(payload.get("dim"), int) or payload["dim"] < 1:
                raise BackendError(f"{self.base_url}/info: bad dim {payload.get('dim')!r}")
            self._info = payload
        return self._info

    @property
    def dim(self) -> int:
        return self.info()["dim"]

    @property
    def model_id(self) -> str:
        return str(self.info().get("model_id", "unknown"))

    def _request(self, method: str, route: str, body: dict | None = None) -> dict:
        url = self.base_url + route
        last_error: Exception | None = None
        for _ in range(self.retries + 1):
            try:
                with self._http_lock:
                    resp = self._session.request(method, url, json=body, timeout=self.timeout)
            except requests.RequestException as exc:
                last_error = exc
                continue
            if resp.status_code >= 500:
                last_error = BackendError(f"{url}: HTTP {resp.status_code}")
                continue
            if resp.status_code != 200:
                raise BackendError(f"{url}: HTTP {resp.status_code}: {resp.text[:200]}")
            try:
                return resp.json()
            except ValueError as exc:
                raise BackendError(f"{url}: non-JSON response") from exc
        raise BackendError(f"{url}: unreachable after {self.retries + 1} attempts: {last_error}")

    def embed_batch(self, texts: list[str]) -> list[np.ndarray]:
        """Embed many texts, chunked to the service batch cap."""
        out: list[np.ndarray] = []
        for i in range(0, len(texts), self.batch_cap):
            chunk = texts[i : i + self.batch_cap]
            payload = self._request("POST", "/embed", {"texts": chunk})
            vectors = payload.get("vectors")
            if not isinstance(vectors, list) or len(vectors) != len(chunk):
                raise BackendError(
                    f"{self.base_url}/embed: expected {len(chunk)} vectors, "
                    f"got {len(vectors) if isinstance(vectors, list) else vectors!r}"
                )
            dim = self.dim
            for text, comps in zip(chunk, vectors):
                vec = np.asarray(comps, dtype=np.float64)
                if vec.ndim != 1 or vec.shape[0] != dim:
                    raise BackendError(
                        f"{self.base_url}/embed: wrong dimension for {text!r}"
                    )
                if not np.all(np.isfinite(vec)) or not np.any(vec):
                    raise BackendError(
                        f"{self.base_url}/embed: invalid vector for {text!r}"
                    )
                vec.flags.writeable = False
                out.append(vec)
        return out

    def embed_word(self, token: str) -> EmbedResult:
        return EmbedResult(vector=self.embed_batch([token])[0], source=SOURCE_REMOTE)

    def embed_sentence(self, sentence: str) -> EmbedResult:
        return EmbedResult(vector=self.embed_batch([sentence])[0], source=SOURCE_REMOTE)


class CachingBackend:
    """Memoizes embed calls on the exact input string (word and sentence
    namespaces kept apart). Results with and without the cache are
    identical; only the number of inner-backend invocations changes.

    Thread-safe: concurrent readers are fine, insertion is serialized, and
    a duplicate concurrent computation of the same key is harmless because
    backends are deterministic (first stored result wins).
    """

    def __init__(self, inner):
        self.inner = inner
        self._cache: dict[tuple[str, str], EmbedResult] = {}
        self._lock = threading.Lock()
        self.calls = {"word": 0, "sentence": 0}

    @property
    def dim(self) -> int:
        return self.inner.dim

    @property
    def model_id(self) -> str:
        return self.inner.model_id

    def _lookup(self, kind: str, text: str, compute) -> EmbedResult:
        key = (kind, text)
        with self._lock:
            hit = self._cache.get(key)
        if hit is not None:
            return hit
        result = compute(text)
        with self._lock:
            stored = self._cache.setdefault(key, result)
            if stored is result:
                self.calls[kind] += 1
        return stored

    def embed_word(self, token: str) -> EmbedResult:
        return self._lookup("word", token, self.inner.embed_word)

    def embed_sentence(self, sentence: str) -> EmbedResult:
        return self._lookup("sentence", sentence, self.inner.embed_sentence)
