"""JSONL tweet ingestion: validate records, filter by language and date
range, drop duplicate ids, and partition by UTC calendar day.

One JSON object per line with required keys ``id``, ``created_at`` (RFC
3339), ``lang`` and ``text``; unknown keys are ignored. Day assignment
always uses UTC, never the host timezone.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import date, datetime, timezone
from pathlib import Path
from typing import Iterable, Iterator

from .errors import InputError

MAX_TEXT_LEN = 4000

SKIP_REASONS = ("malformed", "language", "out_of_range", "retweet")

# Above this fraction of malformed lines a file is presumed to be in the
# wrong format entirely.
MALFORMED_RATIO_LIMIT = 0.5


@dataclass
class TweetRecord:
    id: str
    created_at: datetime  # timezone-aware, UTC
    lang: str
    text: str

    @property
    def day(self) -> date:
        return self.created_at.date()


@dataclass
class IngestSummary:
    total_lines: int = 0
    accepted: int = 0
    skipped: dict[str, int] = field(
        default_factory=lambda: {reason: 0 for reason in SKIP_REASONS}
    )
    duplicates: int = 0
    files: list[str] = field(default_factory=list)

    @property
    def skipped_total(self) -> int:
        return sum(self.skipped.values())

    def check_conservation(self) -> bool:
        return self.accepted + self.skipped_total + self.duplicates == self.total_lines


def parse_timestamp(value: str) -> datetime:
    """Parse an RFC 3339 timestamp into an aware UTC datetime."""
    if value.endswith(("Z", "z")):
        value = value[:-1] + "+00:00"
    dt = datetime.fromisoformat(value)
    if dt.tzinfo is None:
        raise ValueError("timestamp lacks a UTC offset")
    return dt.astimezone(timezone.utc)


def _parse_line(line: str) -> TweetRecord:
    obj = json.loads(line)
    if not isinstance(obj, dict):
        raise ValueError("line is not a JSON object")
    rec_id = obj.get("id")
    if not isinstance(rec_id, str) or not rec_id:
        raise ValueError("missing or empty id")
    created = obj.get("created_at")
    if not isinstance(created, str):
        raise ValueError("missing created_at")
    ts = parse_timestamp(created)
    lang = obj.get("lang")
    if not isinstance(lang, str) or not lang:
        raise ValueError("missing lang")
    text = obj.get("text")
    if not isinstance(text, str) or not text.strip():
        raise ValueError("missing or empty text")
    if len(text) > MAX_TEXT_LEN:
        raise ValueError(f"text longer than {MAX_TEXT_LEN} characters")
    return TweetRecord(id=rec_id, created_at=ts, lang=lang.lower(), text=text)


def ingest_corpus(
    paths: Iterable[str | Path],
    date_range: tuple[date, date],
    lang: str,
    summary: IngestSummary | None = None,
    drop_retweets: bool = False,
) -> Iterator[TweetRecord]:
    """Stream validated records from JSONL files in file order.

    Records failing to parse, with a mismatched language, or outside the
    inclusive ``date_range`` are skipped and counted per reason in
    ``summary``; duplicate ids keep the first occurrence. A file whose
    malformed-line ratio exceeds 50% aborts the run (wrong input format).
    """
    start, end = date_range
    if start > end:
        raise InputError(f"date range start {start} is after end {end}")
    if summary is None:
        summary = IngestSummary()
    want_lang = lang.lower()
    seen_ids: set[str] = set()

    for path in paths:
        path = Path(path)
        summary.files.append(str(path))
        file_lines = 0
        file_malformed = 0
        try:
            fh = open(path, encoding="utf-8")
        except OSError as exc:
            raise InputError(f"cannot read corpus file {path}: {exc}") from exc
        with fh:
            for line in fh:
                file_lines += 1
                summary.total_lines += 1
                try:
                    rec = _parse_line(line)
                except (ValueError, json.JSONDecodeError):
                    summary.skipped["malformed"] += 1
                    file_malformed += 1
                    continue
                if rec.lang != want_lang:
                    summary.skipped["language"] += 1
                    continue
                if not (start <= rec.day <= end):
                    summary.skipped["out_of_range"] += 1
                    continue
                if drop_retweets and rec.text.startswith("RT @"):
                    summary.skipped["retweet"] += 1
                    continue
                if rec.id in seen_ids:
                    summary.duplicates += 1
                    continue
                seen_ids.add(rec.id)
                summary.accepted += 1
                yield rec
        if file_lines and file_malformed / file_lines > MALFORMED_RATIO_LIMIT:
            raise InputError(
                f"{path}: {file_malformed} of {file_lines} lines are malformed "
                "(over 50%); this does not look like a tweet JSONL file"
            )


def partition_by_day(records: Iterable[TweetRecord]) -> dict[date, list[TweetRecord]]:
    """Bucket records by UTC day, buckets ordered by date ascending.

    File-internal record order is preserved within each bucket.
    """
    buckets: dict[date, list[TweetRecord]] = {}
    for rec in records:
        buckets.setdefault(rec.day, []).append(rec)
    return {day: buckets[day] for day in sorted(buckets)}
