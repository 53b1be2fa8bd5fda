"""Command-line interface.

Subcommands: ``run`` (full pipeline), ``validate-targets`` (pairwise target
similarity only), ``synth`` (generate a seeded corpus + lexicon), ``counts``
(daily tweet counts only). Every config-file key has a mirroring flag, and
flags win. Exit codes: 0 success, 1 configuration error, 2 input/format
error, 3 backend unreachable.
"""

from __future__ import annotations

import argparse
import sys
from datetime import date
from pathlib import Path

from .backends import load_lexicon
from .cleaning import HASHTAG_MODES
from .config import (
    METHOD_CHOICES,
    build_run_config,
    read_config_file,
    validate_run_config,
)
from .errors import BackendError, ConfigError, InputError
from .pipeline import (
    count_outputs,
    emit_run_outputs,
    run_pipeline,
    validate_targets_outputs,
)
from .synth import ClusterSpec, SynthSpec, generate_corpus, generate_lexicon

SYNTH_CORPUS = "corpus.jsonl"
SYNTH_LEXICON = "lexicon.txt"


class _Parser(argparse.ArgumentParser):
    """Routes usage errors through the config-error exit code."""

    def error(self, message):
        raise ConfigError(message)


def _add_shared_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", metavar="FILE", help="INI config file")
    parser.add_argument(
        "--input", dest="inputs", action="append", metavar="FILE", help="corpus JSONL (repeatable)"
    )
    parser.add_argument("--from", dest="date_from", metavar="YYYY-MM-DD", help="first day, inclusive")
    parser.add_argument("--to", dest="date_to", metavar="YYYY-MM-DD", help="last day, inclusive")
    parser.add_argument("--lang", help="language code filter (default en)")
    parser.add_argument(
        "--target",
        dest="targets",
        action="append",
        metavar="LABEL[:ROLE]",
        help="target word, role subject (default) or control (repeatable)",
    )
    parser.add_argument("--method", choices=METHOD_CHOICES, help="scoring method(s)")
    parser.add_argument("--top-n", dest="top_n", type=int, metavar="N", help="words per day (word method)")
    parser.add_argument(
        "--backend", metavar="SPEC", help="embedding backend: lexicon:<path> or service:<url>"
    )
    parser.add_argument("--stopwords", metavar="FILE", help="stopword list (default: packaged)")
    parser.add_argument("--hashtag-mode", dest="hashtag_mode", choices=HASHTAG_MODES)
    parser.add_argument(
        "--strict-denominator",
        dest="strict_denominator",
        action="store_const",
        const=True,
        default=None,
        help="divide by items considered even when some are out of vocabulary",
    )
    parser.add_argument(
        "--frequency-weighted",
        dest="frequency_weighted",
        action="store_const",
        const=True,
        default=None,
        help="weight word-method means by daily token frequency",
    )
    parser.add_argument(
        "--drop-retweets",
        dest="drop_retweets",
        action="store_const",
        const=True,
        default=None,
        help="skip tweets whose text starts with 'RT @'",
    )
    parser.add_argument(
        "--marker",
        dest="markers",
        action="append",
        metavar="YYYY-MM-DD:LABEL:STYLE",
        help="event marker line in the trend plot (style primary|secondary, repeatable)",
    )
    parser.add_argument("--out", metavar="DIR", help="output directory")
    parser.add_argument("--jobs", type=int, metavar="N", help="parallel day workers (0 = auto)")
    parser.add_argument("--seed", type=int, metavar="N", help="seed for synthetic generation")


def _config_path(args) -> Path | None:
    return Path(args.config) if getattr(args, "config", None) else None


def cmd_run(args) -> int:
    cfg = build_run_config(args, _config_path(args))
    validate_run_config(cfg)
    result = run_pipeline(cfg)
    for path in emit_run_outputs(cfg, result):
        print(path)
    return 0


def cmd_validate_targets(args) -> int:
    cfg = build_run_config(args, _config_path(args))
    validate_run_config(cfg, need_corpus=False)
    if len(cfg.targets) < 2:
        raise ConfigError(f"validate-targets needs at least 2 targets, got {len(cfg.targets)}")
    for path in validate_targets_outputs(cfg):
        print(path)
    return 0


def cmd_counts(args) -> int:
    cfg = build_run_config(args, _config_path(args))
    validate_run_config(cfg, need_analysis=False)
    path, summary = count_outputs(cfg)
    print(path)
    print(f"accepted {summary.accepted} of {summary.total_lines} lines", file=sys.stderr)
    return 0


def _cfg_int(raw: str, key: str) -> int:
    try:
        return int(raw.strip())
    except ValueError as exc:
        raise ConfigError(f"[synth] {key} must be an integer, got {raw!r}") from exc


def _cfg_float(raw: str, key: str) -> float:
    try:
        return float(raw.strip())
    except ValueError as exc:
        raise ConfigError(f"[synth] {key} must be a number, got {raw!r}") from exc


def _parse_cluster_line(raw: str) -> ClusterSpec:
    name, sep, tokens = raw.partition(":")
    members = tokens.split()
    if not sep or not name.strip() or not members:
        raise ConfigError(f"cluster must look like 'name: tok tok ...', got {raw!r}")
    return ClusterSpec(name.strip().lower(), [t.lower() for t in members])


_SYNTH_INT_KEYS = {
    "seed", "days", "tweets_per_day", "vocab_size", "dim",
    "spike_start", "spike_end", "min_tokens", "max_tokens",
}
_SYNTH_FLOAT_KEYS = {"intra_cosine", "inter_cosine", "injection_rate", "noise_rate"}


def synth_spec_from(args) -> SynthSpec:
    """Build a SynthSpec from the `[synth]` config section plus flags."""
    spec = SynthSpec()
    config_path = _config_path(args)
    if config_path is not None:
        parser = read_config_file(config_path)
        if parser.has_section("synth"):
            for key, raw in parser.items("synth"):
                if key in _SYNTH_INT_KEYS:
                    setattr(spec, key, _cfg_int(raw, key))
                elif key in _SYNTH_FLOAT_KEYS:
                    setattr(spec, key, _cfg_float(raw, key))
                elif key == "spike_cluster":
                    spec.spike_cluster = raw.strip().lower()
                elif key == "start_date":
                    try:
                        spec.start_date = date.fromisoformat(raw.strip())
                    except ValueError as exc:
                        raise ConfigError(f"[synth] start_date: {exc}") from exc
                elif key == "cluster":
                    spec.clusters = [
                        _parse_cluster_line(line)
                        for line in raw.splitlines()
                        if line.strip()
                    ]
                else:
                    raise ConfigError(f"unknown [synth] key {key!r} in {config_path}")
    if getattr(args, "seed", None) is not None:
        spec.seed = args.seed
    return spec


def cmd_synth(args) -> int:
    spec = synth_spec_from(args)
    out = Path(args.out) if args.out else Path("out")
    try:
        spec.validate()
        out.mkdir(parents=True, exist_ok=True)
        lexicon_path = out / SYNTH_LEXICON
        corpus_path = out / SYNTH_CORPUS
        generate_lexicon(spec, lexicon_path)
        lexicon = load_lexicon(lexicon_path)
        generate_corpus(spec, corpus_path, lexicon=lexicon)
    except InputError as exc:
        # all synth inputs are parameters, so failures are config errors
        raise ConfigError(str(exc)) from exc
    print(lexicon_path)
    print(corpus_path)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="trendsim",
        description=(
            "Measure how semantically close a tweet corpus is to target words, "
            "day by day, and report trends."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    run_p = sub.add_parser("run", help="score a corpus and emit CSV/SVG reports")
    _add_shared_flags(run_p)
    run_p.set_defaults(func=cmd_run)

    vt_p = sub.add_parser(
        "validate-targets", help="emit the pairwise target-similarity heatmap and CSV"
    )
    _add_shared_flags(vt_p)
    vt_p.set_defaults(func=cmd_validate_targets)

    counts_p = sub.add_parser("counts", help="emit the daily tweet-count CSV only")
    _add_shared_flags(counts_p)
    counts_p.set_defaults(func=cmd_counts)

    synth_p = sub.add_parser("synth", help="generate a seeded synthetic corpus and lexicon")
    synth_p.add_argument("--config", metavar="FILE", help="INI config file with a [synth] section")
    synth_p.add_argument("--seed", type=int, metavar="N", help="override the generation seed")
    synth_p.add_argument("--out", metavar="DIR", help="output directory (default: out)")
    synth_p.set_defaults(func=cmd_synth)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


def entrypoint(argv: list[str] | None = None) -> int:
    try:
        return main(argv)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BackendError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(entrypoint())
