"""Reporting: spike statistics, CSV emitters (exact byte contracts), and the
SVG trend/heatmap renderers parsed back as XML."""

from __future__ import annotations

import math
import re
import xml.etree.ElementTree as ET
from datetime import date

import numpy as np
import pytest

from trendsim.errors import InputError
from trendsim.report import (
    SPIKE_INSUFFICIENT,
    SPIKE_OK,
    SPIKE_UNDEFINED_STD,
    EventMarker,
    _cell_shade,
    emit_call_report_csv,
    emit_counts_csv,
    emit_heatmap_svg,
    emit_matrix_csv,
    emit_scores_csv,
    emit_trend_svg,
    parse_marker,
    spike_report,
)
from trendsim.scoring import DailyScore, TargetWord, target_similarity_matrix

from conftest import naive_cosine


def _score(day, target="war", method="word", score=0.5, embedded=2, considered=2):
    return DailyScore(day, target, method, score, embedded, considered)


def _d(day_of_july: int) -> date:
    return date(2020, 7, day_of_july)


# ---------------------------------------------------------------------------
# markers


def test_parse_marker():
    m = parse_marker("2020-07-15:ceasefire:primary")
    assert m == EventMarker(date(2020, 7, 15), "ceasefire", "primary")
    assert parse_marker("2020-07-20:summit:secondary").style == "secondary"


@pytest.mark.parametrize(
    "raw",
    [
        "2020-07-15:ceasefire",  # missing style
        "2020-07-15:a:b:c",  # too many fields
        "july-15:ceasefire:primary",  # bad date
        "2020-07-15:ceasefire:dotted",  # unknown style
    ],
)
def test_parse_marker_rejects(raw):
    with pytest.raises(InputError):
        parse_marker(raw)


def test_event_marker_style_validated():
    with pytest.raises(InputError):
        EventMarker(date(2020, 7, 15), "x", "wavy")


# ---------------------------------------------------------------------------
# spike report


def _spike_scores():
    rows = []
    for i, v in enumerate((0.1, 0.2, 0.3)):
        rows.append(_score(_d(1 + i), score=v))
    for i, v in enumerate((0.5, 0.6, 0.7)):
        rows.append(_score(_d(10 + i), score=v))
    # same days, different target and method: must be ignored
    for i in range(3):
        rows.append(_score(_d(1 + i), target="computer", score=9.9))
        rows.append(_score(_d(1 + i), method="sentence", score=9.9))
    return rows


def test_spike_report_hand_oracle():
    # baseline mean 0.2, sample std 0.1; test mean 0.6 -> z = 4 exactly
    rep = spike_report(_spike_scores(), "war", (_d(1), _d(3)), (_d(10), _d(12)), "word")
    assert rep.status == SPIKE_OK
    assert rep.baseline_mean == pytest.approx(0.2, abs=1e-12)
    assert rep.baseline_std == pytest.approx(0.1, abs=1e-12)
    assert rep.test_mean == pytest.approx(0.6, abs=1e-12)
    assert rep.z == pytest.approx(4.0, abs=1e-9)


def test_spike_report_uses_sample_std():
    # population std of {0.1,0.2,0.3} is sqrt(2/300); sample std is 0.1
    rep = spike_report(_spike_scores(), "war", (_d(1), _d(3)), (_d(10), _d(12)), "word")
    population = math.sqrt(((0.1 - 0.2) ** 2 + 0.0 + (0.3 - 0.2) ** 2) / 3)
    assert rep.baseline_std != pytest.approx(population, abs=1e-6)
    assert rep.baseline_std == pytest.approx(np.std([0.1, 0.2, 0.3], ddof=1), abs=1e-12)


def test_spike_report_ignores_empty_records():
    rows = _spike_scores() + [
        _score(_d(2), score=None, embedded=0),  # EMPTY inside baseline window
        _score(_d(11), score=None, embedded=0),
    ]
    rep = spike_report(rows, "war", (_d(1), _d(3)), (_d(10), _d(12)), "word")
    assert rep.status == SPIKE_OK
    assert rep.baseline_mean == pytest.approx(0.2, abs=1e-12)


def test_spike_report_undefined_std():
    rows = [_score(_d(i), score=0.2) for i in (1, 2, 3)]
    rows += [_score(_d(i), score=0.6) for i in (10, 11, 12)]
    rep = spike_report(rows, "war", (_d(1), _d(3)), (_d(10), _d(12)), "word")
    assert rep.status == SPIKE_UNDEFINED_STD
    assert rep.z is None
    assert rep.baseline_mean == pytest.approx(0.2)
    assert rep.test_mean == pytest.approx(0.6)


def test_spike_report_insufficient_data():
    rows = [_score(_d(i), score=0.1 * i) for i in (1, 2)]  # only two baseline points
    rows += [_score(_d(i), score=0.6) for i in (10, 11, 12)]
    rep = spike_report(rows, "war", (_d(1), _d(3)), (_d(10), _d(12)), "word")
    assert rep.status == SPIKE_INSUFFICIENT
    assert rep.baseline_mean is None and rep.z is None


def test_spike_report_window_validation():
    rows = _spike_scores()
    with pytest.raises(InputError, match="inverted"):
        spike_report(rows, "war", (_d(3), _d(1)), (_d(10), _d(12)), "word")
    with pytest.raises(InputError, match="overlap"):
        spike_report(rows, "war", (_d(1), _d(10)), (_d(10), _d(12)), "word")
    # disjoint windows in either order are fine
    rep = spike_report(rows, "war", (_d(10), _d(12)), (_d(1), _d(3)), "word")
    assert rep.status == SPIKE_OK
    assert rep.z == pytest.approx(-4.0, abs=1e-9)


# ---------------------------------------------------------------------------
# CSV emitters


def test_scores_csv_exact_bytes(tmp_path):
    out = tmp_path / "scores.csv"
    rows = [
        _score(_d(13), score=None, embedded=0, considered=5),  # EMPTY day
        _score(_d(12), method="word", score=0.5, embedded=2, considered=2),
        _score(_d(12), method="sentence", score=-0.25, embedded=3, considered=4),
        _score(_d(12), target="computer", score=0.125, embedded=1, considered=2),
    ]
    emit_scores_csv(rows, out)
    assert out.read_text(encoding="utf-8") == (
        "date,target,method,score,items_embedded,items_considered,coverage\n"
        "2020-07-12,computer,word,0.125000,1,2,0.500000\n"
        "2020-07-12,war,sentence,-0.250000,3,4,0.750000\n"
        "2020-07-12,war,word,0.500000,2,2,1.000000\n"
        "2020-07-13,war,word,,0,5,0.000000\n"
    )


def test_scores_csv_header_only(tmp_path):
    out = tmp_path / "scores.csv"
    emit_scores_csv([], out)
    assert out.read_text(encoding="utf-8") == (
        "date,target,method,score,items_embedded,items_considered,coverage\n"
    )


def test_counts_csv_zero_fills_range(tmp_path):
    out = tmp_path / "counts.csv"
    emit_counts_csv({_d(2): 7, _d(4): 1}, out, date_range=(_d(1), _d(4)))
    assert out.read_text(encoding="utf-8") == (
        "date,tweet_count\n"
        "2020-07-01,0\n"
        "2020-07-02,7\n"
        "2020-07-03,0\n"
        "2020-07-04,1\n"
    )


def test_counts_csv_without_range(tmp_path):
    out = tmp_path / "counts.csv"
    emit_counts_csv({_d(4): 1, _d(2): 7}, out)
    assert out.read_text(encoding="utf-8") == (
        "date,tweet_count\n2020-07-02,7\n2020-07-04,1\n"
    )


def test_counts_csv_inverted_range(tmp_path):
    with pytest.raises(InputError):
        emit_counts_csv({}, tmp_path / "counts.csv", date_range=(_d(4), _d(1)))


def test_call_report_csv_exact_bytes(tmp_path):
    out = tmp_path / "calls.csv"
    calls = {
        (_d(2), "word"): 50,
        (_d(1), "word"): 120,
        (_d(1), "sentence"): 400,
    }
    emit_call_report_csv(calls, out)
    assert out.read_text(encoding="utf-8") == (
        "date,method,embedding_calls\n"
        "2020-07-01,sentence,400\n"
        "2020-07-01,word,120\n"
        "2020-07-02,word,50\n"
    )


def _tiny_matrix():
    war = TargetWord("war", np.array([1.0, 0.0, 0.0]))
    peace = TargetWord("peace", np.array([0.9, 0.1, 0.0]))
    computer = TargetWord("computer", np.array([0.0, 0.0, 1.0]))
    return target_similarity_matrix([war, peace, computer])


def test_matrix_csv_exact_bytes(tmp_path):
    out = tmp_path / "matrix.csv"
    matrix = _tiny_matrix()
    emit_matrix_csv(matrix, out)
    wp = naive_cosine([1.0, 0.0, 0.0], [0.9, 0.1, 0.0])
    assert out.read_text(encoding="utf-8") == (
        "target,war,peace,computer\n"
        f"war,1.000000,{wp:.6f},0.000000\n"
        f"peace,{wp:.6f},1.000000,0.000000\n"
        "computer,0.000000,0.000000,1.000000\n"
    )


# ---------------------------------------------------------------------------
# trend SVG


def _trend_scores():
    rows = []
    values = {1: 0.10, 2: 0.15, 3: None, 4: 0.60, 5: 0.20}
    for day, v in values.items():
        rows.append(
            _score(_d(day), score=v, embedded=0 if v is None else 2, considered=2)
        )
    for day in (1, 2, 3, 4, 5):
        rows.append(_score(_d(day), method="sentence", score=0.3))
    return rows


def _polylines(svg_path):
    tree = ET.parse(svg_path)
    return {p.get("id"): p for p in tree.getroot().iter("{http://www.w3.org/2000/svg}polyline")}


def test_trend_svg_structure(tmp_path):
    out = tmp_path / "trend.svg"
    markers = [
        EventMarker(_d(4), "cease&fire", "primary"),
        EventMarker(_d(25), "outside", "secondary"),  # beyond the data range
    ]
    emit_trend_svg(_trend_scores(), markers, out)

    text = out.read_text(encoding="utf-8")
    assert text.startswith('<?xml version="1.0" encoding="UTF-8"?>')
    assert 'version="1.1"' in text

    root = ET.parse(out).getroot()  # well-formed XML
    assert root.tag.endswith("svg")

    lines = _polylines(out)
    assert set(lines) == {"series-war-word", "series-war-sentence"}
    # one vertex per non-EMPTY day
    assert len(lines["series-war-word"].get("points").split()) == 4
    assert len(lines["series-war-sentence"].get("points").split()) == 5
    # sentence series is dashed, word series solid
    assert lines["series-war-sentence"].get("stroke-dasharray") == "7,3"
    assert lines["series-war-word"].get("stroke-dasharray") is None

    ns = "{http://www.w3.org/2000/svg}"
    marker_lines = [
        el for el in root.iter(f"{ns}line") if el.get("class") == "event-marker"
    ]
    assert len(marker_lines) == 1  # out-of-range marker clipped away
    assert marker_lines[0].get("stroke-dasharray") == "5,3"

    texts = [el.text for el in root.iter(f"{ns}text")]
    assert "cease&fire" in texts  # XML-escaped in the file, restored on parse
    assert "war (word)" in texts and "war (sentence)" in texts
    assert "date" in texts and "score" in texts
    assert "2020-07-01" in texts and "2020-07-05" in texts


def test_trend_svg_axis_spans_empty_days(tmp_path):
    # EMPTY records still extend the date axis
    rows = [
        _score(_d(10), score=0.5),
        _score(_d(1), score=None, embedded=0),
        _score(_d(20), score=None, embedded=0),
    ]
    out = tmp_path / "trend.svg"
    emit_trend_svg(rows, [], out)
    root = ET.parse(out).getroot()
    texts = [el.text for el in root.iter("{http://www.w3.org/2000/svg}text")]
    assert "2020-07-01" in texts and "2020-07-20" in texts


def test_trend_svg_all_empty_is_fatal(tmp_path):
    rows = [_score(_d(1), score=None, embedded=0)]
    with pytest.raises(InputError, match="EMPTY"):
        emit_trend_svg(rows, [], tmp_path / "trend.svg")


def test_trend_svg_flat_series_padding(tmp_path):
    rows = [_score(_d(i), score=0.5) for i in (1, 2, 3)]
    out = tmp_path / "trend.svg"
    emit_trend_svg(rows, [], out)  # must not divide by zero
    assert "0.500" in out.read_text(encoding="utf-8")


def test_trend_svg_deterministic_bytes(tmp_path):
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    markers = [EventMarker(_d(4), "event", "primary")]
    emit_trend_svg(_trend_scores(), markers, a)
    emit_trend_svg(_trend_scores(), markers, b)
    assert a.read_bytes() == b.read_bytes()


# ---------------------------------------------------------------------------
# heatmap SVG


def test_cell_shade_mapping():
    assert _cell_shade(1.0) == 20
    assert _cell_shade(-1.0) == 235
    assert _cell_shade(0.0) == 128
    assert _cell_shade(2.0) == 20  # clamped
    assert _cell_shade(-2.0) == 235
    values = np.linspace(-1, 1, 21)
    shades = [_cell_shade(v) for v in values]
    assert shades == sorted(shades, reverse=True)  # darker as value grows


def test_heatmap_svg_structure(tmp_path):
    out = tmp_path / "heatmap.svg"
    matrix = _tiny_matrix()
    emit_heatmap_svg(matrix, out)
    root = ET.parse(out).getroot()
    ns = "{http://www.w3.org/2000/svg}"
    rects = {r.get("id"): r for r in root.iter(f"{ns}rect") if r.get("id")}
    assert len(rects) == 9
    for i in range(3):
        for j in range(3):
            rect = rects[f"cell-{i}-{j}"]
            assert float(rect.get("data-value")) == pytest.approx(
                float(matrix.cells[i, j]), abs=1e-6
            )
    assert rects["cell-0-0"].get("data-value") == "1.000000"

    # darkness tracks the similarity: war/peace is darker than war/computer
    def fill_level(rect):
        m = re.fullmatch(r"rgb\((\d+),(\d+),(\d+)\)", rect.get("fill"))
        assert m and m.group(1) == m.group(2) == m.group(3)
        return int(m.group(1))

    assert fill_level(rects["cell-0-1"]) < fill_level(rects["cell-0-2"])
    assert fill_level(rects["cell-0-0"]) == 20  # unit diagonal

    texts = [el.text for el in root.iter(f"{ns}text")]
    for label in matrix.labels:
        assert texts.count(label) == 2  # row and column header
    assert "1.000" in texts


def test_heatmap_svg_deterministic_bytes(tmp_path):
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    emit_heatmap_svg(_tiny_matrix(), a)
    emit_heatmap_svg(_tiny_matrix(), b)
    assert a.read_bytes() == b.read_bytes()
