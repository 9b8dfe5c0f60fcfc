"""Timing harness for determinant and inverse strategies.

Cells run one after another.  Each (method, n) cell is validated against an
exact reference before its timings are reported, and a warm-up call is made
and discarded before sampling.
"""

from __future__ import annotations

import csv
import hashlib
import io
import math
import os
import statistics
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from . import closed_form, decomposition, oracle
from .circulant import Circulant, from_params, materialize
from .horadam import HoradamParams

DET_METHODS = ("closed", "bareiss", "dft", "fft")
DEFAULT_DET_METHODS = ("closed", "bareiss", "dft")
INV_METHODS = ("gauss", "structured", "dft")
DEFAULT_TIMEOUT_SECS = 60.0
FLOAT_RTOL = 1e-6
CSV_COLUMNS = ("method", "n", "entry_bits_max", "median_ns", "min_ns", "value_digest", "validated")


def timeout_from_env() -> float:
    raw = os.environ.get("HORACIRC_TIMEOUT_SECS")
    return float(raw) if raw else DEFAULT_TIMEOUT_SECS


@dataclass
class BenchRow:
    method: str
    n: int
    entry_bits_max: int
    median_ns: int | None
    min_ns: int | None
    value_digest: str
    validated: bool
    samples: int = 0
    timed_out: bool = False
    value_bits: int | None = None
    note: str | None = None


@dataclass
class BenchReport:
    kind: str
    params: HoradamParams
    rows: list[BenchRow] = field(default_factory=list)

    def ratios(self, slow: str, fast: str) -> dict[int, float]:
        """``median(slow) / median(fast)`` per n where both were timed."""
        by = {(r.method, r.n): r for r in self.rows}
        out = {}
        for n in sorted({r.n for r in self.rows}):
            s, f = by.get((slow, n)), by.get((fast, n))
            if s and f and s.median_ns and f.median_ns:
                out[n] = s.median_ns / f.median_ns
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in self.rows:
            w.writerow([
                r.method, r.n, r.entry_bits_max,
                "" if r.median_ns is None else r.median_ns,
                "" if r.min_ns is None else r.min_ns,
                r.value_digest, str(r.validated).lower(),
            ])
        return buf.getvalue()

    def to_json(self) -> dict:
        doc = {"kind": self.kind, "params": self.params.as_dict(),
               "rows": [asdict(r) for r in self.rows]}
        if self.kind == "det":
            doc["ratio_bareiss_over_closed"] = {
                str(n): v for n, v in self.ratios("bareiss", "closed").items()
            }
        else:
            doc["ratio_gauss_over_structured"] = {
                str(n): v for n, v in self.ratios("gauss", "structured").items()
            }
        return doc


def _digest(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def _bits(x: Fraction) -> int:
    return max(abs(x.numerator).bit_length(), x.denominator.bit_length())


def _time_cell(fn: Callable[[], object], repeat: int, timeout: float):
    """Warm up once, then sample up to ``repeat`` runs within the time budget.

    Python cannot pre-empt a running computation, so the budget is checked
    between calls: a warm-up that alone exceeds it marks the cell timed out.
    """
    t0 = time.perf_counter_ns()
    value = fn()
    warm = time.perf_counter_ns() - t0
    if warm > timeout * 1e9:
        return value, [], True
    samples = []
    spent = 0
    for _ in range(repeat):
        t0 = time.perf_counter_ns()
        fn()
        dt = time.perf_counter_ns() - t0
        samples.append(dt)
        spent += dt
        if spent > timeout * 1e9:
            break
    return value, samples, False


def _float_det_ok(phase: complex, logabs: float, exact: Fraction, circ: Circulant) -> bool:
    if exact == 0:
        # no meaningful relative error; require tiny against a Hadamard-type bound
        bound = circ.n * math.log(max(1.0, sum(abs(float(c)) for c in circ.first_row)))
        return logabs <= bound + math.log(FLOAT_RTOL)
    sign = 1 if exact > 0 else -1
    return (
        abs(logabs - oracle.exact_log_abs(exact)) <= FLOAT_RTOL
        and abs(phase - sign) <= FLOAT_RTOL
    )


def bench_det(
    params: HoradamParams,
    sizes,
    repeat: int = 3,
    methods=DEFAULT_DET_METHODS,
    timeout: float | None = None,
) -> BenchReport:
    if repeat < 1:
        raise ValueError("repeat must be >= 1")
    if any(n < 3 for n in sizes):
        raise ValueError("sizes must be >= 3")
    unknown = set(methods) - set(DET_METHODS)
    if unknown:
        raise ValueError(f"unknown det methods: {sorted(unknown)}")
    timeout = timeout_from_env() if timeout is None else timeout
    report = BenchReport("det", params)
    gave_up: set[str] = set()
    for n in sizes:
        circ = from_params(params, n)
        bits = max(_bits(c) for c in circ.first_row)
        dense = materialize(circ)
        runners = {
            "closed": lambda: closed_form.det_eq3(params, n),
            "bareiss": lambda: oracle.bareiss_det(dense),
            "dft": lambda: oracle.dft_logdet(circ),
            "fft": lambda: oracle.fft_logdet(circ),
        }
        results = {}
        for m in methods:
            if m in gave_up:
                report.rows.append(BenchRow(m, n, bits, None, None, "", False,
                                            timed_out=True, note="skipped after earlier timeout"))
                continue
            value, samples, timed_out = _time_cell(runners[m], repeat, timeout)
            if timed_out:
                gave_up.add(m)
            results[m] = (value, samples, timed_out)
        exact = _reference_det(results, dense)
        for m in methods:
            if m not in results:
                continue
            value, samples, timed_out = results[m]
            if m in ("closed", "bareiss"):
                ok = value == exact
                digest, vbits = _digest(str(value)), _bits(value)
            else:
                phase, logabs = value
                ok = _float_det_ok(phase, logabs, exact, circ)
                digest, vbits = _digest(f"{phase.real:.9f},{phase.imag:.9f},{logabs:.12g}"), None
            report.rows.append(BenchRow(
                m, n, bits,
                int(statistics.median(samples)) if samples else None,
                min(samples) if samples else None,
                digest, ok, samples=len(samples), timed_out=timed_out, value_bits=vbits,
                note=None if ok else "value disagrees with exact reference",
            ))
    return report


def _reference_det(results: dict, dense) -> Fraction:
    # the dense oracle is the reference; reuse its value if it was just timed
    if "bareiss" in results:
        return results["bareiss"][0]
    return oracle.bareiss_det(dense)


def bench_inverse(
    params: HoradamParams,
    sizes,
    repeat: int = 3,
    methods=INV_METHODS,
    timeout: float | None = None,
    u_variant: str = "corrected",
) -> BenchReport:
    """Time inverse strategies.  The structured path uses ``u_variant`` for U;
    its validity flag is recorded in ``note``."""
    if repeat < 1:
        raise ValueError("repeat must be >= 1")
    if any(n < 3 for n in sizes):
        raise ValueError("sizes must be >= 3")
    unknown = set(methods) - set(INV_METHODS)
    if unknown:
        raise ValueError(f"unknown inverse methods: {sorted(unknown)}")
    timeout = timeout_from_env() if timeout is None else timeout
    report = BenchReport("inverse", params)
    gave_up: set[str] = set()
    for n in sizes:
        circ = from_params(params, n)
        bits = max(_bits(c) for c in circ.first_row)
        dense = materialize(circ)
        runners = {
            "gauss": lambda: oracle.gauss_inverse(dense)[0],
            "structured": lambda: decomposition.structured_inverse(params, n, u_variant=u_variant),
            "dft": lambda: list(oracle.dft_inverse(circ).first_row),
        }
        reference = None
        for m in methods:
            if m in gave_up:
                report.rows.append(BenchRow(m, n, bits, None, None, "", False,
                                            timed_out=True, note="skipped after earlier timeout"))
                continue
            try:
                value, samples, timed_out = _time_cell(runners[m], repeat, timeout)
            except Exception as exc:  # singular instances, degenerate denominators
                report.rows.append(BenchRow(m, n, bits, None, None, "", False,
                                            note=f"{type(exc).__name__}: {exc}"))
                continue
            if timed_out:
                gave_up.add(m)
            if reference is None:
                reference = oracle.gauss_inverse(dense)[0] if m != "gauss" else value
            note = None
            if m == "gauss":
                row = value
                ok = row == reference
            elif m == "structured":
                note = f"structured_valid={str(value.valid).lower()} u_variant={u_variant}"
                row = list(value.P[0])
                ok = value.valid and row == reference
            else:
                row = value
                ref = np.array([float(x) for x in reference])
                ok = bool(np.max(np.abs(np.array(row) - ref)) <= FLOAT_RTOL * np.max(np.abs(ref)))
            exact_row = m != "dft"
            digest = _digest(" ".join(str(x) for x in row) if exact_row
                             else " ".join(f"{x:.12g}" for x in row))
            report.rows.append(BenchRow(
                m, n, bits,
                int(statistics.median(samples)) if samples else None,
                min(samples) if samples else None,
                digest, ok, samples=len(samples), timed_out=timed_out,
                value_bits=max(_bits(x) for x in row) if exact_row else None,
                note=note,
            ))
    return report
