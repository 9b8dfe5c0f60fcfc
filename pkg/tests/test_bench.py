import csv
import io

import pytest

from horacirc import bench
from horacirc.horadam import PRESETS

FIB = PRESETS["fibonacci"]


def test_det_methods_agree_small():
    rep = bench.bench_det(FIB, [8], repeat=2, methods=bench.DET_METHODS)
    assert {r.method for r in rep.rows} == set(bench.DET_METHODS)
    assert all(r.validated for r in rep.rows)
    closed, bareiss = (next(r for r in rep.rows if r.method == m) for m in ("closed", "bareiss"))
    assert closed.value_digest == bareiss.value_digest


def test_single_repeat_single_sample():
    rep = bench.bench_det(FIB, [3], repeat=1)
    assert all(r.samples == 1 and r.validated for r in rep.rows)


def test_empty_sizes():
    assert bench.bench_inverse(FIB, [], repeat=1).rows == []
    assert bench.bench_det(FIB, [], repeat=1).rows == []


def test_inverse_methods():
    rep = bench.bench_inverse(FIB, [6], repeat=1)
    assert [r.method for r in rep.rows] == ["gauss", "structured", "dft"]
    assert all(r.validated for r in rep.rows)
    structured = rep.rows[1]
    assert "structured_valid=true" in structured.note


def test_inverse_printed_U_not_validated():
    rep = bench.bench_inverse(FIB, [5], repeat=1, methods=("structured",), u_variant="printed")
    assert not rep.rows[0].validated
    assert "structured_valid=false" in rep.rows[0].note


def test_csv_columns_and_json_mirror():
    rep = bench.bench_det(FIB, [8, 16], repeat=1)
    rows = list(csv.DictReader(io.StringIO(rep.to_csv())))
    assert tuple(rows[0]) == bench.CSV_COLUMNS
    assert len(rows) == 6
    doc = rep.to_json()
    assert set(doc["ratio_bareiss_over_closed"]) == {"8", "16"}
    assert len(doc["rows"]) == 6


def test_large_det_compared_in_log_space():
    rep = bench.bench_det(FIB, [48], repeat=1, methods=("closed", "dft", "fft"))
    assert all(r.validated for r in rep.rows)


def test_timeout_is_recorded(monkeypatch):
    monkeypatch.setenv("HORACIRC_TIMEOUT_SECS", "0")
    rep = bench.bench_det(FIB, [8, 16], repeat=2, methods=("bareiss",))
    assert all(r.timed_out for r in rep.rows)
    assert rep.rows[0].samples == 0 and rep.rows[0].median_ns is None
    assert rep.rows[1].note == "skipped after earlier timeout"


def test_bad_arguments():
    with pytest.raises(ValueError):
        bench.bench_det(FIB, [2])
    with pytest.raises(ValueError):
        bench.bench_det(FIB, [4], repeat=0)
    with pytest.raises(ValueError):
        bench.bench_det(FIB, [4], methods=("magic",))
