"""End-to-end orchestration: ingest -> clean -> lexical -> scoring -> report.

Days are independent work units; they may be processed by a thread pool
(`jobs`), and outputs are byte-identical regardless of the worker count:
scores do not depend on cache state, and the embedding-call report is
derived from date-ordered set arithmetic rather than racy counters.
"""

from __future__ import annotations

import concurrent.futures
from dataclasses import dataclass, field
from datetime import date, timedelta
from pathlib import Path

from . import lexical, scoring
from .backends import CachingBackend, LexiconBackend, RemoteBackend, load_lexicon
from .cleaning import CleanText, RemovalCounts, clean_text
from .config import RunConfig, parse_backend_spec
from .errors import InputError
from .ingest import IngestSummary, TweetRecord, ingest_corpus, partition_by_day
from .report import (
    emit_call_report_csv,
    emit_counts_csv,
    emit_heatmap_svg,
    emit_matrix_csv,
    emit_scores_csv,
    emit_trend_svg,
)
from .scoring import (
    METHOD_SENTENCE,
    METHOD_WORD,
    DailyScore,
    SimilarityMatrix,
    TargetWord,
    per_day_new_items,
    target_similarity_matrix,
)

SCORES_CSV = "scores.csv"
COUNTS_CSV = "counts.csv"
TREND_SVG = "trend.svg"
HEATMAP_SVG = "heatmap.svg"
CALL_REPORT_CSV = "call_report.csv"
RUN_SUMMARY_TXT = "run_summary.txt"
MATRIX_CSV = "matrix.csv"


@dataclass
class RunResult:
    scores: list[DailyScore]
    counts: dict[date, int]
    call_report: dict[tuple[date, str], int]
    call_totals: dict[str, int]
    matrix: SimilarityMatrix | None
    ingest: IngestSummary
    removals: RemovalCounts
    backend_model: str
    targets: list[TargetWord]


def build_backend(spec_str: str) -> CachingBackend:
    """Construct the configured backend behind a memoizing cache. A remote
    service is probed immediately so an unreachable URL fails at startup."""
    scheme, rest = parse_backend_spec(spec_str)
    if scheme == "lexicon":
        return CachingBackend(LexiconBackend(load_lexicon(rest)))
    remote = RemoteBackend(rest)
    remote.info()
    return CachingBackend(remote)


def prepare_targets(cfg: RunConfig, backend: CachingBackend) -> list[TargetWord]:
    targets = []
    for label, role in cfg.targets:
        result = backend.embed_word(label)
        if result.miss:
            raise InputError(f"target {label!r} is out of vocabulary for the backend")
        targets.append(TargetWord(label, result.vector, role))
    return targets


def day_range(start: date, end: date) -> list[date]:
    return [start + timedelta(days=i) for i in range((end - start).days + 1)]


@dataclass
class _DayWork:
    day: date
    scores: list[DailyScore] = field(default_factory=list)
    word_items: list[str] = field(default_factory=list)
    sentence_items: list[str] = field(default_factory=list)
    removals: RemovalCounts = field(default_factory=RemovalCounts)


def _process_day(
    day: date,
    records: list[TweetRecord],
    cfg: RunConfig,
    targets: list[TargetWord],
    backend: CachingBackend,
    stopwords: set[str],
) -> _DayWork:
    work = _DayWork(day)
    cleaned: list[CleanText] = []
    for record in records:
        ct = clean_text(record.text, hashtag_mode=cfg.hashtag_mode)
        cleaned.append(ct)
        work.removals = work.removals + ct.removals
    if METHOD_WORD in cfg.methods:
        table = lexical.build_frequency_table(day, cleaned, stopwords)
        work.word_items = lexical.top_n(table, cfg.top_n)
        for target in targets:
            work.scores.append(
                scoring.dmss_word(
                    table,
                    cfg.top_n,
                    target,
                    backend,
                    strict_denominator=cfg.strict_denominator,
                    weighted=cfg.frequency_weighted,
                )
            )
    if METHOD_SENTENCE in cfg.methods:
        sentences = lexical.split_sentences(cleaned, day)
        work.sentence_items = sorted(set(sentences.sentences))
        for target in targets:
            work.scores.append(
                scoring.dmss_sentence(
                    sentences,
                    target,
                    backend,
                    strict_denominator=cfg.strict_denominator,
                )
            )
    return work


def run_pipeline(cfg: RunConfig) -> RunResult:
    backend = build_backend(cfg.backend)
    targets = prepare_targets(cfg, backend)
    stopwords = lexical.load_stopwords(cfg.stopwords)
    summary = IngestSummary()
    records = list(
        ingest_corpus(
            cfg.inputs,
            (cfg.date_from, cfg.date_to),
            cfg.lang,
            summary=summary,
            drop_retweets=cfg.drop_retweets,
        )
    )
    by_day = partition_by_day(records)
    days = day_range(cfg.date_from, cfg.date_to)
    jobs = min(cfg.effective_jobs(), len(days))

    def job(day: date) -> _DayWork:
        return _process_day(day, by_day.get(day, []), cfg, targets, backend, stopwords)

    if jobs <= 1:
        day_results = [job(day) for day in days]
    else:
        with concurrent.futures.ThreadPoolExecutor(max_workers=jobs) as pool:
            day_results = list(pool.map(job, days))

    scores: list[DailyScore] = []
    removals = RemovalCounts()
    word_items: dict[date, list[str]] = {}
    sentence_items: dict[date, list[str]] = {}
    for result in day_results:
        scores.extend(result.scores)
        removals = removals + result.removals
        word_items[result.day] = result.word_items
        sentence_items[result.day] = result.sentence_items

    call_report: dict[tuple[date, str], int] = {}
    if METHOD_WORD in cfg.methods:
        # Target vectors are fetched before the day loop, so day counts
        # exclude them and stay bounded by top_n.
        pre_embedded = {t.label for t in targets}
        for day, count in per_day_new_items(word_items, already_embedded=pre_embedded).items():
            call_report[(day, METHOD_WORD)] = count
    if METHOD_SENTENCE in cfg.methods:
        for day, count in per_day_new_items(sentence_items).items():
            call_report[(day, METHOD_SENTENCE)] = count

    matrix = target_similarity_matrix(targets) if len(targets) >= 2 else None
    counts = {day: len(by_day.get(day, [])) for day in days}
    return RunResult(
        scores=scores,
        counts=counts,
        call_report=call_report,
        call_totals=dict(backend.calls),
        matrix=matrix,
        ingest=summary,
        removals=removals,
        backend_model=backend.model_id,
        targets=targets,
    )


def render_run_summary(cfg: RunConfig, result: RunResult) -> str:
    """Plain-text observability: effective config, ingest counts, skip
    reasons, per-day coverage, embedding call totals. No timestamps, so the
    file is deterministic."""
    lines: list[str] = []
    lines.append("run summary")
    lines.append("===========")
    lines.append("")
    lines.append("[effective configuration]")
    lines.extend(cfg.summary_lines())
    lines.append("")
    lines.append("[backend]")
    lines.append(f"model = {result.backend_model}")
    lines.append(
        "embedding calls (cache misses): "
        + ", ".join(f"{m}={result.call_totals.get(m, 0)}" for m in sorted(result.call_totals))
    )
    lines.append("")
    lines.append("[ingestion]")
    lines.append(f"files = {result.ingest.files}")
    lines.append(f"lines read = {result.ingest.total_lines}")
    lines.append(f"accepted = {result.ingest.accepted}")
    lines.append(
        "skipped: "
        + ", ".join(f"{reason}={count}" for reason, count in sorted(result.ingest.skipped.items()))
    )
    lines.append(f"duplicate ids dropped = {result.ingest.duplicates}")
    lines.append("")
    lines.append("[cleaning removals]")
    lines.append(", ".join(f"{k}={v}" for k, v in result.removals.as_dict().items()))
    lines.append("")
    lines.append("[coverage per day]")
    coverage: dict[tuple[date, str], list[float]] = {}
    for s in result.scores:
        coverage.setdefault((s.day, s.method), []).append(s.coverage)
    for day in sorted({d for d, _ in coverage}):
        cells = []
        for method in cfg.methods:
            vals = coverage.get((day, method))
            if vals:
                cells.append(f"{method}={sum(vals) / len(vals):.6f}")
        lines.append(f"{day.isoformat()}  " + "  ".join(cells))
    lines.append("")
    return "\n".join(lines) + "\n"


def emit_run_outputs(cfg: RunConfig, result: RunResult) -> list[Path]:
    """Write the run's output files into the configured directory."""
    out = cfg.out_dir
    out.mkdir(parents=True, exist_ok=True)
    paths: list[Path] = []

    scores_path = out / SCORES_CSV
    emit_scores_csv(result.scores, scores_path)
    paths.append(scores_path)

    counts_path = out / COUNTS_CSV
    emit_counts_csv(result.counts, counts_path, (cfg.date_from, cfg.date_to))
    paths.append(counts_path)

    trend_path = out / TREND_SVG
    emit_trend_svg(result.scores, cfg.markers, trend_path)
    paths.append(trend_path)

    if result.matrix is not None:
        heatmap_path = out / HEATMAP_SVG
        emit_heatmap_svg(result.matrix, heatmap_path)
        paths.append(heatmap_path)

    calls_path = out / CALL_REPORT_CSV
    emit_call_report_csv(result.call_report, calls_path)
    paths.append(calls_path)

    summary_path = out / RUN_SUMMARY_TXT
    with open(summary_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(render_run_summary(cfg, result))
    paths.append(summary_path)
    return paths


def validate_targets_outputs(cfg: RunConfig) -> list[Path]:
    """Embed the configured targets, emit the pairwise similarity heatmap
    and matrix CSV. No corpus is read."""
    backend = build_backend(cfg.backend)
    targets = prepare_targets(cfg, backend)
    matrix = target_similarity_matrix(targets)
    out = cfg.out_dir
    out.mkdir(parents=True, exist_ok=True)
    heatmap_path = out / HEATMAP_SVG
    emit_heatmap_svg(matrix, heatmap_path)
    matrix_path = out / MATRIX_CSV
    emit_matrix_csv(matrix, matrix_path)
    return [heatmap_path, matrix_path]


def count_outputs(cfg: RunConfig) -> tuple[Path, IngestSummary]:
    """Ingest only, then write the daily tweet counts CSV."""
    summary = IngestSummary()
    records = list(
        ingest_corpus(
            cfg.inputs,
            (cfg.date_from, cfg.date_to),
            cfg.lang,
            summary=summary,
            drop_retweets=cfg.drop_retweets,
        )
    )
    by_day = partition_by_day(records)
    counts = {day: len(rs) for day, rs in by_day.items()}
    out = cfg.out_dir
    out.mkdir(parents=True, exist_ok=True)
    counts_path = out / COUNTS_CSV
    emit_counts_csv(counts, counts_path, (cfg.date_from, cfg.date_to))
    return counts_path, summary
