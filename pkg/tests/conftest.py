"""Shared fixtures: tiny lexicons, a session-scoped synthetic corpus, and an
in-process CLI runner."""

from __future__ import annotations

import contextlib
import io
from pathlib import Path

import numpy as np
import pytest

from trendsim.cli import entrypoint
from trendsim.synth import SynthSpec, generate_corpus, generate_lexicon


def write_lexicon(path: Path, entries: dict[str, list[float]], dim: int | None = None) -> Path:
    """Write entries in the flat lexicon file format."""
    if dim is None:
        dim = len(next(iter(entries.values()))) if entries else 1
    lines = [f"{len(entries)} {dim}"]
    for token, vec in entries.items():
        lines.append(token + " " + " ".join(f"{c:.8f}" for c in vec))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


@pytest.fixture
def tiny_lexicon(tmp_path: Path) -> Path:
    """Hand-sized vocabulary with easy geometry in dim 3."""
    return write_lexicon(
        tmp_path / "tiny_lexicon.txt",
        {
            "war": [1.0, 0.0, 0.0],
            "peace": [0.9, 0.1, 0.0],
            "battle": [0.8, 0.2, 0.0],
            "computer": [0.0, 0.0, 1.0],
            "keyboard": [0.0, 0.1, 0.9],
            "sun": [0.0, 1.0, 0.0],
            "moon": [0.1, 0.9, 0.0],
        },
    )


@pytest.fixture(scope="session")
def synth_spec() -> SynthSpec:
    return SynthSpec()  # frozen defaults: seed 42, 30 days x 200 tweets, dim 16


@pytest.fixture(scope="session")
def synth_paths(tmp_path_factory, synth_spec) -> dict[str, Path]:
    """Default synthetic corpus + lexicon, generated once per session."""
    root = tmp_path_factory.mktemp("synth")
    lexicon_path = root / "lexicon.txt"
    corpus_path = root / "corpus.jsonl"
    generate_lexicon(synth_spec, lexicon_path)
    generate_corpus(synth_spec, corpus_path)
    return {"lexicon": lexicon_path, "corpus": corpus_path, "root": root}


def run_cli(*argv: str) -> tuple[int, str, str]:
    """Invoke the CLI in-process; returns (exit_code, stdout, stderr)."""
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = entrypoint(list(argv))
    return code, out.getvalue(), err.getvalue()


def naive_cosine(a, b) -> float:
    """Independent double-loop cosine (no numpy) used as a test oracle."""
    num = 0.0
    na = 0.0
    nb = 0.0
    for x, y in zip(a, b):
        num += float(x) * float(y)
        na += float(x) * float(x)
        nb += float(y) * float(y)
    return num / ((na ** 0.5) * (nb ** 0.5))


def parse_lexicon_naive(path: Path) -> dict[str, list[float]]:
    """Independent lexicon reader (no package code)."""
    lines = path.read_text(encoding="utf-8").splitlines()
    count, dim = (int(x) for x in lines[0].split())
    entries: dict[str, list[float]] = {}
    for line in lines[1:]:
        fields = line.split(" ")
        assert len(fields) == dim + 1
        entries[fields[0]] = [float(c) for c in fields[1:]]
    assert len(entries) == count
    return entries


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240817)
