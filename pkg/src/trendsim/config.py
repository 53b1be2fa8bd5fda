"""Run configuration: INI-style config files merged with command-line flags.

Flags override file values. Every knob lives in the `[run]` section (synth
parameters in `[synth]`); list-valued keys (`input`, `target`, `marker`)
take one entry per line.
"""

from __future__ import annotations

import configparser
import os
from dataclasses import dataclass, field
from datetime import date
from pathlib import Path

from .cleaning import HASHTAG_MODES
from .errors import ConfigError
from .report import EventMarker, parse_marker
from .scoring import METHOD_SENTENCE, METHOD_WORD, ROLE_CONTROL, ROLE_SUBJECT

METHOD_CHOICES = ("word", "sentence", "both")
BACKEND_SCHEMES = ("lexicon", "service")

_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


@dataclass
class RunConfig:
    inputs: list[Path] = field(default_factory=list)
    date_from: date | None = None
    date_to: date | None = None
    lang: str = "en"
    targets: list[tuple[str, str]] = field(default_factory=list)  # (label, role)
    methods: list[str] = field(default_factory=lambda: [METHOD_WORD, METHOD_SENTENCE])
    top_n: int = 1000
    backend: str = ""
    stopwords: Path | None = None
    hashtag_mode: str = "remove"
    strict_denominator: bool = False
    frequency_weighted: bool = False
    drop_retweets: bool = False
    markers: list[EventMarker] = field(default_factory=list)
    out_dir: Path = Path("out")
    jobs: int = 0  # 0 = number of processors
    seed: int = 42

    def effective_jobs(self) -> int:
        return self.jobs if self.jobs > 0 else (os.cpu_count() or 1)

    def subject_labels(self) -> list[str]:
        return [label for label, role in self.targets if role == ROLE_SUBJECT]

    def summary_lines(self) -> list[str]:
        """Effective configuration, echoed into the run summary."""
        return [
            f"input = {', '.join(str(p) for p in self.inputs)}",
            f"from = {self.date_from}",
            f"to = {self.date_to}",
            f"lang = {self.lang}",
            "targets = " + ", ".join(f"{label}:{role}" for label, role in self.targets),
            f"methods = {', '.join(self.methods)}",
            f"top_n = {self.top_n}",
            f"backend = {self.backend}",
            f"stopwords = {self.stopwords if self.stopwords else '(packaged default)'}",
            f"hashtag_mode = {self.hashtag_mode}",
            f"strict_denominator = {self.strict_denominator}",
            f"frequency_weighted = {self.frequency_weighted}",
            f"drop_retweets = {self.drop_retweets}",
            "markers = " + ", ".join(
                f"{m.date.isoformat()}:{m.label}:{m.style}" for m in self.markers
            ),
            f"out = {self.out_dir}",
            f"jobs = {self.jobs if self.jobs > 0 else 'auto'}",
            f"seed = {self.seed}",
        ]


def _parse_bool(raw: str, key: str) -> bool:
    low = raw.strip().lower()
    if low in _TRUE:
        return True
    if low in _FALSE:
        return False
    raise ConfigError(f"{key} must be a boolean (true/false), got {raw!r}")


def _parse_int(raw: str, key: str) -> int:
    try:
        return int(raw.strip())
    except ValueError as exc:
        raise ConfigError(f"{key} must be an integer, got {raw!r}") from exc


def _parse_date(raw: str, key: str) -> date:
    try:
        return date.fromisoformat(raw.strip())
    except ValueError as exc:
        raise ConfigError(f"{key} must be an ISO date (YYYY-MM-DD), got {raw!r}") from exc


def parse_target(raw: str) -> tuple[str, str]:
    """Parse `label` or `label:role` with role in {subject, control}."""
    text = raw.strip()
    if ":" in text:
        label, _, role = text.partition(":")
    else:
        label, role = text, ROLE_SUBJECT
    label = label.strip().lower()
    role = role.strip().lower()
    if not label or any(ch.isspace() for ch in label):
        raise ConfigError(f"bad target label in {raw!r}")
    if role not in (ROLE_SUBJECT, ROLE_CONTROL):
        raise ConfigError(f"target role must be subject or control, got {role!r} in {raw!r}")
    return label, role


def parse_methods(raw: str) -> list[str]:
    choice = raw.strip().lower()
    if choice == "both":
        return [METHOD_WORD, METHOD_SENTENCE]
    if choice in (METHOD_WORD, METHOD_SENTENCE):
        return [choice]
    raise ConfigError(f"method must be one of {METHOD_CHOICES}, got {raw!r}")


def parse_backend_spec(raw: str) -> tuple[str, str]:
    """Split `lexicon:<path>` / `service:<url>` into (scheme, rest)."""
    scheme, sep, rest = raw.strip().partition(":")
    if not sep or scheme not in BACKEND_SCHEMES or not rest:
        raise ConfigError(
            f"backend must look like lexicon:<path> or service:<url>, got {raw!r}"
        )
    return scheme, rest


def _multiline(raw: str) -> list[str]:
    return [line.strip() for line in raw.splitlines() if line.strip()]


def read_config_file(path: Path) -> configparser.ConfigParser:
    parser = configparser.ConfigParser(interpolation=None)
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    except configparser.Error as exc:
        raise ConfigError(f"bad config file {path}: {exc}") from exc
    return parser


_RUN_KEYS = {
    "input", "from", "to", "lang", "target", "method", "top_n", "backend",
    "stopwords", "hashtag_mode", "strict_denominator", "frequency_weighted",
    "drop_retweets", "marker", "out", "jobs", "seed",
}


def build_run_config(args, config_path: Path | None) -> RunConfig:
    """Merge the config file (if any) with argparse values; flags win."""
    section: dict[str, str] = {}
    if config_path is not None:
        parser = read_config_file(config_path)
        if parser.has_section("run"):
            for key, value in parser.items("run"):
                if key not in _RUN_KEYS:
                    raise ConfigError(f"unknown [run] key {key!r} in {config_path}")
                section[key] = value

    cfg = RunConfig()
    if "input" in section:
        cfg.inputs = [Path(p) for p in _multiline(section["input"])]
    if "from" in section:
        cfg.date_from = _parse_date(section["from"], "from")
    if "to" in section:
        cfg.date_to = _parse_date(section["to"], "to")
    if "lang" in section:
        cfg.lang = section["lang"].strip().lower()
    if "target" in section:
        cfg.targets = [parse_target(t) for t in _multiline(section["target"])]
    if "method" in section:
        cfg.methods = parse_methods(section["method"])
    if "top_n" in section:
        cfg.top_n = _parse_int(section["top_n"], "top_n")
    if "backend" in section:
        cfg.backend = section["backend"].strip()
    if "stopwords" in section and section["stopwords"].strip():
        cfg.stopwords = Path(section["stopwords"].strip())
    if "hashtag_mode" in section:
        cfg.hashtag_mode = section["hashtag_mode"].strip().lower()
    if "strict_denominator" in section:
        cfg.strict_denominator = _parse_bool(section["strict_denominator"], "strict_denominator")
    if "frequency_weighted" in section:
        cfg.frequency_weighted = _parse_bool(section["frequency_weighted"], "frequency_weighted")
    if "drop_retweets" in section:
        cfg.drop_retweets = _parse_bool(section["drop_retweets"], "drop_retweets")
    if "marker" in section:
        cfg.markers = [parse_marker(m) for m in _multiline(section["marker"])]
    if "out" in section:
        cfg.out_dir = Path(section["out"].strip())
    if "jobs" in section:
        cfg.jobs = _parse_int(section["jobs"], "jobs")
    if "seed" in section:
        cfg.seed = _parse_int(section["seed"], "seed")

    # flags override file values
    if getattr(args, "inputs", None):
        cfg.inputs = [Path(p) for p in args.inputs]
    if getattr(args, "date_from", None):
        cfg.date_from = _parse_date(args.date_from, "--from")
    if getattr(args, "date_to", None):
        cfg.date_to = _parse_date(args.date_to, "--to")
    if getattr(args, "lang", None):
        cfg.lang = args.lang.strip().lower()
    if getattr(args, "targets", None):
        cfg.targets = [parse_target(t) for t in args.targets]
    if getattr(args, "method", None):
        cfg.methods = parse_methods(args.method)
    if getattr(args, "top_n", None) is not None:
        cfg.top_n = args.top_n
    if getattr(args, "backend", None):
        cfg.backend = args.backend.strip()
    if getattr(args, "stopwords", None):
        cfg.stopwords = Path(args.stopwords)
    if getattr(args, "hashtag_mode", None):
        cfg.hashtag_mode = args.hashtag_mode
    if getattr(args, "strict_denominator", None) is not None:
        cfg.strict_denominator = args.strict_denominator
    if getattr(args, "frequency_weighted", None) is not None:
        cfg.frequency_weighted = args.frequency_weighted
    if getattr(args, "drop_retweets", None) is not None:
        cfg.drop_retweets = args.drop_retweets
    if getattr(args, "markers", None):
        cfg.markers = [parse_marker(m) for m in args.markers]
    if getattr(args, "out", None):
        cfg.out_dir = Path(args.out)
    if getattr(args, "jobs", None) is not None:
        cfg.jobs = args.jobs
    if getattr(args, "seed", None) is not None:
        cfg.seed = args.seed
    return cfg


def validate_run_config(
    cfg: RunConfig, *, need_corpus: bool = True, need_analysis: bool = True
) -> None:
    """Check invariants. ``need_corpus`` covers input files and date range;
    ``need_analysis`` covers targets, methods, and the backend."""
    if need_corpus:
        if not cfg.inputs:
            raise ConfigError("no input files configured (input / --input)")
        if cfg.date_from is None or cfg.date_to is None:
            raise ConfigError("date range is required (from/to or --from/--to)")
        if cfg.date_from > cfg.date_to:
            raise ConfigError(f"date range is inverted: {cfg.date_from} > {cfg.date_to}")
        if not cfg.lang:
            raise ConfigError("lang must be non-empty")
    if need_analysis:
        if not cfg.targets:
            raise ConfigError("at least one target is required (target / --target)")
        labels = [label for label, _ in cfg.targets]
        if len(set(labels)) != len(labels):
            dupes = sorted({x for x in labels if labels.count(x) > 1})
            raise ConfigError(f"duplicate target labels: {dupes}")
        if not cfg.subject_labels():
            raise ConfigError("at least one target must have the subject role")
        if cfg.top_n < 1:
            raise ConfigError(f"top_n must be >= 1, got {cfg.top_n}")
        if not set(cfg.methods) <= {METHOD_WORD, METHOD_SENTENCE} or not cfg.methods:
            raise ConfigError(
                f"methods must be a non-empty subset of word/sentence, got {cfg.methods}"
            )
        if cfg.hashtag_mode not in HASHTAG_MODES:
            raise ConfigError(
                f"hashtag_mode must be one of {HASHTAG_MODES}, got {cfg.hashtag_mode!r}"
            )
        if not cfg.backend:
            raise ConfigError("backend is required (backend / --backend)")
        parse_backend_spec(cfg.backend)
    if cfg.jobs < 0:
        raise ConfigError(f"jobs must be >= 0, got {cfg.jobs}")
    if cfg.date_from is not None and cfg.date_to is not None:
        for marker in cfg.markers:
            if not cfg.date_from <= marker.date <= cfg.date_to:
                raise ConfigError(
                    f"marker {marker.label!r} at {marker.date} is outside the run range "
                    f"[{cfg.date_from}, {cfg.date_to}]"
                )
