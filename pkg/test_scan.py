#!/usr/bin/env python3
"""
Tests for scans, scan files and the figure.
"""

import sys
import os

# Add the project root to the Python path
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

import csv
import math
import re
from fractions import Fraction

import pytest

from models.scan_row import CSV_COLUMNS, ScanRow
from models.speed_vector import SpeedVector
from repository.scan_repository import read_rows, write_rows
from services.figure_service import marker_counts, render_figure, write_figure
from services.scan_service import compute_row, generate_vectors, run_scan, summarize
from utils.exceptions import ScanFileError

NAN = float("nan")


def _row(speeds, gap, plus, minus, minus_q, statuses=("certified", "certified", "certified")):
    v = SpeedVector(speeds)
    return ScanRow(
        v=v, gap=gap, t_min=gap, q=gap.denominator,
        lambda_plus=plus, lambda_plus_cert=plus,
        lambda_minus=minus, lambda_minus_cert=minus,
        lambda_minus_q=minus_q, lambda_minus_q_cert=minus_q,
        degree=2 * v.max_speed, samples=16 * v.max_speed + 1,
        status_plus=statuses[0], status_minus=statuses[1], status_minus_q=statuses[2],
    )


def test_generation_is_seeded_and_distinct():
    first = generate_vectors(6, 50, count=30, seed=4)
    second = generate_vectors(6, 50, count=30, seed=4)
    assert first == second
    assert len(set(first)) == 30
    for v in first:
        assert len(v) == 5
        assert 1 <= v.speeds[0] and v.max_speed <= 50
    assert generate_vectors(6, 50, count=30, seed=5) != first


def test_exhaustive_generation_and_dense_draws():
    assert len(generate_vectors(3, 6, exhaustive=True)) == 15
    everything = generate_vectors(3, 5, count=10, seed=2)
    assert sorted(v.speeds for v in everything) == sorted(v.speeds for v in generate_vectors(3, 5, exhaustive=True))


@pytest.mark.parametrize("n,max_speed,count", [(1, 10, 5), (6, 3, 5), (3, 5, 11), (3, 5, 0)])
def test_invalid_scan_ranges(n, max_speed, count):
    with pytest.raises(ValueError):
        generate_vectors(n, max_speed, count=count)


def test_compute_row_sandwiches_the_gap():
    row = compute_row(SpeedVector.of(1, 2, 3))
    assert row.gap == Fraction(1, 4)
    assert row.q == 4
    assert row.degree == 6 and row.samples == 49
    assert row.status_plus == "certified"
    assert row.sandwich_violations() == ()
    if row.status_minus_q == "certified":
        assert row.lambda_minus_q_cert <= 0.25 + 1e-12


def test_single_speed_row_skips_lambda_minus():
    row = compute_row(SpeedVector.of(1))
    assert row.status_minus == "skipped"
    assert row.status_minus_q == "skipped"
    assert math.isnan(row.lambda_minus_cert)
    assert row.status_plus == "certified"


def test_scan_keeps_generation_order_with_threads(tmp_path):
    vectors = generate_vectors(3, 5, count=4, seed=1)
    rows = run_scan(vectors, threads=2)
    assert [r.v for r in rows] == vectors
    summary = summarize(rows)
    assert summary["rows"] == 4
    assert summary["sandwich_violations"] == []
    assert summary["conjecture_failures"] == []


def test_six_runner_scan_is_sound():
    vectors = generate_vectors(6, 50, count=5, seed=1)
    rows = run_scan(vectors, threads=2)
    assert len(rows) == 5
    for row in rows:
        assert row.n == 6
        assert "error" not in (row.status_plus, row.status_minus, row.status_minus_q)
        assert row.status_plus == "certified"
    summary = summarize(rows)
    assert summary["sandwich_violations"] == []
    assert summary["monotonicity_violations"] == []


def test_csv_round_trip_and_determinism(tmp_path):
    rows = [_row((1, 2, 3), Fraction(1, 4), 0.25, 0.2, 0.25), _row((1, 3), Fraction(1, 2), 0.5, NAN, NAN,
            ("certified", "infeasible", "skipped"))]
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    write_rows(str(first), rows)
    write_rows(str(second), rows)
    assert first.read_bytes() == second.read_bytes()

    with open(first, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        assert tuple(next(reader)) == CSV_COLUMNS
        assert next(reader)[1] == "1;2;3"

    records = read_rows(first)
    assert len(records) == 2
    assert records[0].gap == 0.25
    assert records[0].certified("minus_q")
    assert not records[1].certified("minus")
    assert math.isnan(records[1].lambda_minus_cert)


def test_json_output_mirrors_csv_fields(tmp_path):
    path = tmp_path / "scan.json"
    write_rows(str(path), [_row((1, 2, 3), Fraction(1, 4), 0.25, 0.2, 0.25)])
    records = read_rows(path)
    assert records[0].speeds == "1;2;3"
    assert records[0].lambda_plus_cert == 0.25


def test_bad_scan_files(tmp_path):
    missing = tmp_path / "missing.csv"
    missing.write_text("n,speeds,gap_num\n3,1;2,1\n", encoding="utf-8")
    with pytest.raises(ScanFileError):
        read_rows(missing)

    bad = tmp_path / "bad.csv"
    write_rows(str(bad), [_row((1, 2, 3), Fraction(1, 4), 0.25, 0.2, 0.25)])
    text = bad.read_text(encoding="utf-8").replace(",6,49,", ",six,49,")
    bad.write_text(text, encoding="utf-8")
    with pytest.raises(ScanFileError):
        read_rows(bad)

    with pytest.raises(ScanFileError):
        read_rows(tmp_path / "nowhere.csv")


def test_figure_marker_counts_follow_statuses(tmp_path):
    rows = [
        _row((1, 2, 3), Fraction(1, 4), 0.25, 0.2, 0.25),
        _row((1, 3), Fraction(1, 2), 0.5, NAN, NAN, ("certified", "infeasible", "skipped")),
        _row((1, 4, 7), Fraction(3, 8), 0.4, 0.3, 0.35, ("certified", "solved_uncertified", "certified")),
    ]
    path = tmp_path / "scan.csv"
    write_rows(str(path), rows)
    records = read_rows(path)
    svg = render_figure(records)
    assert 'width="640"' in svg and 'viewBox="0 0 640 640"' in svg
    assert len(re.findall(r'class="marker series-plus"', svg)) == 3
    assert len(re.findall(r'class="marker series-minus"', svg)) == 1
    assert len(re.findall(r'class="marker series-minus-q"', svg)) == 2
    assert 'class="diagonal"' in svg and 'class="vline"' in svg
    assert marker_counts(records) == {"series-minus-q": 2, "series-minus": 1, "series-plus": 3}


def test_figure_from_header_only_csv(tmp_path):
    path = tmp_path / "empty.csv"
    write_rows(str(path), [])
    out = tmp_path / "fig.svg"
    counts = write_figure(str(out), read_rows(path))
    svg = out.read_text(encoding="utf-8")
    assert svg.lstrip().startswith("<?xml")
    assert "</svg>" in svg
    assert 'class="marker' not in svg
    assert sum(counts.values()) == 0


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
