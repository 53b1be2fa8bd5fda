"""Deterministic emitters: CSV time series, SVG trend plot and heatmap,
and the two-window spike report.

Every emitted file is a pure function of its inputs — no timestamps, no
environment-dependent formatting — so repeated runs are byte-identical.
"""

from __future__ import annotations

import csv
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from datetime import date, timedelta
from xml.sax.saxutils import escape, quoteattr

import numpy as np

from .errors import InputError
from .scoring import DailyScore, SimilarityMatrix

MARKER_STYLES = ("primary", "secondary")
SPIKE_OK = "ok"
SPIKE_UNDEFINED_STD = "undefined-std"
SPIKE_INSUFFICIENT = "insufficient"

_PALETTE = (
    "#1f77b4",
    "#d62728",
    "#2ca02c",
    "#9467bd",
    "#ff7f0e",
    "#8c564b",
    "#17becf",
    "#7f7f7f",
)
_MARKER_COLORS = {"primary": "#1f4e9c", "secondary": "#c02424"}


@dataclass(frozen=True)
class EventMarker:
    date: date
    label: str
    style: str

    def __post_init__(self) -> None:
        if self.style not in MARKER_STYLES:
            raise InputError(f"marker style must be one of {MARKER_STYLES}, got {self.style!r}")


def parse_marker(raw: str) -> EventMarker:
    """Parse a `YYYY-MM-DD:label:style` marker definition."""
    parts = raw.split(":")
    if len(parts) != 3:
        raise InputError(f"marker must look like YYYY-MM-DD:label:style, got {raw!r}")
    day_text, label, style = parts
    try:
        day = date.fromisoformat(day_text)
    except ValueError as exc:
        raise InputError(f"bad marker date {day_text!r}: {exc}") from exc
    if not label:
        raise InputError(f"marker label is empty in {raw!r}")
    return EventMarker(day, label, style)


@dataclass(frozen=True)
class SpikeReport:
    target: str
    method: str
    baseline_window: tuple[date, date]
    test_window: tuple[date, date]
    baseline_mean: float | None
    baseline_std: float | None
    test_mean: float | None
    z: float | None
    status: str  # ok | undefined-std | insufficient


def _window_scores(
    scores: Iterable[DailyScore], target: str, method: str, window: tuple[date, date]
) -> list[float]:
    lo, hi = window
    return [
        s.score
        for s in scores
        if s.target == target
        and s.method == method
        and lo <= s.day <= hi
        and not s.empty
    ]


def spike_report(
    scores: Iterable[DailyScore],
    target: str,
    baseline_window: tuple[date, date],
    test_window: tuple[date, date],
    method: str,
) -> SpikeReport:
    """Two-window comparison: z = (test_mean - baseline_mean) / baseline_std,
    with the sample (n-1) standard deviation. Windows must be disjoint; each
    needs at least 3 non-EMPTY scores or the result is INSUFFICIENT."""
    for name, (lo, hi) in (("baseline", baseline_window), ("test", test_window)):
        if lo > hi:
            raise InputError(f"{name} window is inverted: {lo} > {hi}")
    if not (baseline_window[1] < test_window[0] or test_window[1] < baseline_window[0]):
        raise InputError(
            f"windows overlap: baseline {baseline_window}, test {test_window}"
        )
    scores = list(scores)
    base = _window_scores(scores, target, method, baseline_window)
    test = _window_scores(scores, target, method, test_window)
    if len(base) < 3 or len(test) < 3:
        return SpikeReport(
            target, method, baseline_window, test_window,
            None, None, None, None, SPIKE_INSUFFICIENT,
        )
    base_arr = np.asarray(base, dtype=np.float64)
    test_arr = np.asarray(test, dtype=np.float64)
    baseline_mean = float(base_arr.mean())
    baseline_std = float(base_arr.std(ddof=1))
    test_mean = float(test_arr.mean())
    # identical baseline values can leave a representation-noise std (~1e-17)
    # instead of an exact zero; a z-score against that would be meaningless
    if baseline_std <= abs(baseline_mean) * 1e-12:
        return SpikeReport(
            target, method, baseline_window, test_window,
            baseline_mean, baseline_std, test_mean, None, SPIKE_UNDEFINED_STD,
        )
    z = (test_mean - baseline_mean) / baseline_std
    return SpikeReport(
        target, method, baseline_window, test_window,
        baseline_mean, baseline_std, test_mean, z, SPIKE_OK,
    )


# ---------------------------------------------------------------------------
# CSV emitters
# ---------------------------------------------------------------------------


def emit_scores_csv(scores: Iterable[DailyScore], path) -> None:
    rows = sorted(scores, key=lambda s: (s.day, s.target, s.method))
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(
            ["date", "target", "method", "score", "items_embedded", "items_considered", "coverage"]
        )
        for s in rows:
            writer.writerow(
                [
                    s.day.isoformat(),
                    s.target,
                    s.method,
                    "" if s.empty else f"{s.score:.6f}",
                    s.items_embedded,
                    s.items_considered,
                    f"{s.coverage:.6f}",
                ]
            )


def emit_counts_csv(
    counts: Mapping[date, int], path, date_range: tuple[date, date] | None = None
) -> None:
    """Daily tweet counts. With a date range, every day in the range gets a
    row (zero-count days included); otherwise only observed days appear."""
    if date_range is not None:
        lo, hi = date_range
        if lo > hi:
            raise InputError(f"date range is inverted: {lo} > {hi}")
        days = [lo + timedelta(days=i) for i in range((hi - lo).days + 1)]
    else:
        days = sorted(counts)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["date", "tweet_count"])
        for day in days:
            writer.writerow([day.isoformat(), counts.get(day, 0)])


def emit_call_report_csv(calls: Mapping[tuple[date, str], int], path) -> None:
    """Per-day, per-method backend embedding invocations (cache misses)."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["date", "method", "embedding_calls"])
        for day, method in sorted(calls):
            writer.writerow([day.isoformat(), method, calls[(day, method)]])


def emit_matrix_csv(matrix: SimilarityMatrix, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["target"] + list(matrix.labels))
        for i, label in enumerate(matrix.labels):
            writer.writerow([label] + [f"{matrix.cells[i, j]:.6f}" for j in range(len(matrix.labels))])


# ---------------------------------------------------------------------------
# SVG emitters
# ---------------------------------------------------------------------------

_SVG_HEADER = (
    '<?xml version="1.0" encoding="UTF-8"?>\n'
    '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
    'width="{w}" height="{h}" viewBox="0 0 {w} {h}">\n'
)


def _fmt(value: float) -> str:
    return f"{value:.2f}"


def emit_trend_svg(scores: Iterable[DailyScore], markers: list[EventMarker], path) -> None:
    """Line chart of score against date: one polyline per (target, method),
    a legend, and a dashed vertical line per event marker."""
    scores = list(scores)
    plotted = [s for s in scores if not s.empty]
    if not plotted:
        raise InputError("nothing to plot: every score record is EMPTY")

    series: dict[tuple[str, str], list[DailyScore]] = {}
    for s in plotted:
        series.setdefault((s.target, s.method), []).append(s)
    keys = sorted(series)
    for key in keys:
        series[key].sort(key=lambda s: s.day)

    day_lo = min(s.day for s in scores)
    day_hi = max(s.day for s in scores)
    span_days = max((day_hi - day_lo).days, 1)
    v_lo = min(s.score for s in plotted)
    v_hi = max(s.score for s in plotted)
    if v_lo == v_hi:
        v_lo, v_hi = v_lo - 0.5, v_hi + 0.5
    pad = 0.05 * (v_hi - v_lo)
    v_lo, v_hi = v_lo - pad, v_hi + pad

    width, height = 920.0, 420.0
    m_left, m_right, m_top, m_bottom = 70.0, 220.0, 30.0, 60.0
    plot_w = width - m_left - m_right
    plot_h = height - m_top - m_bottom

    def x_of(day: date) -> float:
        return m_left + plot_w * ((day - day_lo).days / span_days)

    def y_of(value: float) -> float:
        return m_top + plot_h * (1.0 - (value - v_lo) / (v_hi - v_lo))

    parts = [_SVG_HEADER.format(w=int(width), h=int(height))]
    parts.append(f'<rect x="0" y="0" width="{int(width)}" height="{int(height)}" fill="#ffffff"/>\n')

    # axes
    x0, y0 = m_left, m_top + plot_h
    parts.append(
        f'<line x1="{_fmt(x0)}" y1="{_fmt(m_top)}" x2="{_fmt(x0)}" y2="{_fmt(y0)}" '
        'stroke="#000000" stroke-width="1"/>\n'
    )
    parts.append(
        f'<line x1="{_fmt(x0)}" y1="{_fmt(y0)}" x2="{_fmt(m_left + plot_w)}" y2="{_fmt(y0)}" '
        'stroke="#000000" stroke-width="1"/>\n'
    )
    parts.append(
        f'<text x="{_fmt(m_left + plot_w / 2)}" y="{_fmt(height - 12)}" font-size="12" '
        'text-anchor="middle" font-family="sans-serif">date</text>\n'
    )
    parts.append(
        f'<text x="16" y="{_fmt(m_top + plot_h / 2)}" font-size="12" text-anchor="middle" '
        f'font-family="sans-serif" transform="rotate(-90 16 {_fmt(m_top + plot_h / 2)})">'
        "score</text>\n"
    )

    # y ticks
    for i in range(5):
        frac = i / 4
        val = v_lo + frac * (v_hi - v_lo)
        y = y_of(val)
        parts.append(
            f'<line x1="{_fmt(x0 - 4)}" y1="{_fmt(y)}" x2="{_fmt(x0)}" y2="{_fmt(y)}" '
            'stroke="#000000" stroke-width="1"/>\n'
        )
        parts.append(
            f'<text x="{_fmt(x0 - 8)}" y="{_fmt(y + 4)}" font-size="10" text-anchor="end" '
            f'font-family="sans-serif">{val:.3f}</text>\n'
        )

    # x ticks: at most 8, evenly spread over the day span
    tick_count = min(span_days + 1, 8)
    tick_days = sorted({day_lo + timedelta(days=round(i * span_days / max(tick_count - 1, 1))) for i in range(tick_count)})
    for day in tick_days:
        x = x_of(day)
        parts.append(
            f'<line x1="{_fmt(x)}" y1="{_fmt(y0)}" x2="{_fmt(x)}" y2="{_fmt(y0 + 4)}" '
            'stroke="#000000" stroke-width="1"/>\n'
        )
        parts.append(
            f'<text x="{_fmt(x)}" y="{_fmt(y0 + 18)}" font-size="9" text-anchor="middle" '
            f'font-family="sans-serif">{day.isoformat()}</text>\n'
        )

    # markers: dashed vertical lines, clipped to the plotted date range
    for marker in sorted(markers, key=lambda m: (m.date, m.label)):
        if not day_lo <= marker.date <= day_hi:
            continue
        x = x_of(marker.date)
        color = _MARKER_COLORS[marker.style]
        parts.append(
            f'<line class="event-marker" x1="{_fmt(x)}" y1="{_fmt(m_top)}" x2="{_fmt(x)}" '
            f'y2="{_fmt(y0)}" stroke="{color}" stroke-width="1" stroke-dasharray="5,3"/>\n'
        )
        parts.append(
            f'<text x="{_fmt(x + 3)}" y="{_fmt(m_top + 10)}" font-size="9" '
            f'font-family="sans-serif" fill="{color}">{escape(marker.label)}</text>\n'
        )

    # series + legend
    legend_x = m_left + plot_w + 16
    for idx, key in enumerate(keys):
        label, method = key
        color = _PALETTE[idx % len(_PALETTE)]
        dash = "" if method == "word" else ' stroke-dasharray="7,3"'
        points = " ".join(
            f"{_fmt(x_of(s.day))},{_fmt(y_of(s.score))}" for s in series[key]
        )
        sid = quoteattr(f"series-{label}-{method}")
        parts.append(
            f'<polyline id={sid} fill="none" stroke="{color}" stroke-width="1.5"{dash} '
            f'points="{points}"/>\n'
        )
        ly = m_top + 14 + 18 * idx
        parts.append(
            f'<line x1="{_fmt(legend_x)}" y1="{_fmt(ly - 4)}" x2="{_fmt(legend_x + 22)}" '
            f'y2="{_fmt(ly - 4)}" stroke="{color}" stroke-width="1.5"{dash}/>\n'
        )
        parts.append(
            f'<text x="{_fmt(legend_x + 28)}" y="{_fmt(ly)}" font-size="11" '
            f'font-family="sans-serif">{escape(f"{label} ({method})")}</text>\n'
        )

    parts.append("</svg>\n")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("".join(parts))


def _cell_shade(value: float) -> int:
    """Grayscale level for a cosine in [-1, 1]: darker = higher value."""
    clamped = min(1.0, max(-1.0, value))
    return round(235.0 - (clamped + 1.0) / 2.0 * 215.0)


def emit_heatmap_svg(matrix: SimilarityMatrix, path) -> None:
    """k x k grid with row/column labels and numeric annotations; cell
    darkness increases monotonically with the similarity value."""
    k = len(matrix.labels)
    cell = 64.0
    m_left, m_top = 110.0, 46.0
    width = m_left + k * cell + 20
    height = m_top + k * cell + 20

    parts = [_SVG_HEADER.format(w=int(width), h=int(height))]
    parts.append(f'<rect x="0" y="0" width="{int(width)}" height="{int(height)}" fill="#ffffff"/>\n')
    for j, label in enumerate(matrix.labels):
        x = m_left + j * cell + cell / 2
        parts.append(
            f'<text x="{_fmt(x)}" y="{_fmt(m_top - 10)}" font-size="11" text-anchor="middle" '
            f'font-family="sans-serif">{escape(label)}</text>\n'
        )
    for i, label in enumerate(matrix.labels):
        y = m_top + i * cell + cell / 2 + 4
        parts.append(
            f'<text x="{_fmt(m_left - 10)}" y="{_fmt(y)}" font-size="11" text-anchor="end" '
            f'font-family="sans-serif">{escape(label)}</text>\n'
        )
        for j in range(k):
            value = float(matrix.cells[i, j])
            shade = _cell_shade(value)
            x = m_left + j * cell
            y_cell = m_top + i * cell
            cid = quoteattr(f"cell-{i}-{j}")
            parts.append(
                f'<rect id={cid} data-value="{value:.6f}" x="{_fmt(x)}" y="{_fmt(y_cell)}" '
                f'width="{_fmt(cell)}" height="{_fmt(cell)}" '
                f'fill="rgb({shade},{shade},{shade})" stroke="#ffffff" stroke-width="1"/>\n'
            )
            text_fill = "#ffffff" if shade < 128 else "#000000"
            parts.append(
                f'<text x="{_fmt(x + cell / 2)}" y="{_fmt(y_cell + cell / 2 + 4)}" font-size="11" '
                f'text-anchor="middle" font-family="sans-serif" fill="{text_fill}">'
                f"{value:.3f}</text>\n"
            )
    parts.append("</svg>\n")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("".join(parts))
