"""Acceptance gate.  Each test checks one criterion at its stated tolerance and
appends a PASS/FAIL line that is printed in the terminal summary."""

import random
import time
from contextlib import contextmanager
from fractions import Fraction

import pytest

from horacirc import audit, bench, closed_form, decomposition, oracle
from horacirc.audit import GridSpec
from horacirc.circulant import from_params, identity, is_circulant, materialize, matmul
from horacirc.closed_form import bidiag_inverse, bidiagonal
from horacirc.errors import DegenerateCaseError, SingularMatrixError
from horacirc.exact_arith import demote
from horacirc.horadam import PRESETS, binet, seq_int

from conftest import default_grid_params

pytestmark = pytest.mark.slow

FIB, LUCAS = PRESETS["fibonacci"], PRESETS["lucas"]


@contextmanager
def criterion(log, num, title):
    detail = {}
    try:
        yield detail
    except BaseException as exc:
        log.append(f"criterion {num:>2} FAIL  {title}  {detail}  ({type(exc).__name__}: {exc})")
        raise
    log.append(f"criterion {num:>2} PASS  {title}  {detail}")


def dense(params, n):
    return materialize(from_params(params, n))


@pytest.fixture(scope="module")
def grid_runs():
    """The full default grid, run twice; the second run only feeds the
    byte-identity check."""
    t0 = time.perf_counter()
    first = audit.run_grid(GridSpec())
    elapsed = time.perf_counter() - t0
    second = audit.run_grid(GridSpec())
    return first, second, elapsed


def test_c01_closed_form_det(acceptance_log):
    with criterion(acceptance_log, 1, "closed-form det == Bareiss on default grid") as d:
        t0 = time.perf_counter()
        cases = mismatches = 0
        for params, n in GridSpec().param_pairs():
            cases += 1
            if closed_form.det_eq3(params, n) != oracle.bareiss_det(dense(params, n)):
                mismatches += 1
        d["seconds"] = round(time.perf_counter() - t0, 2)
        d.update(cases=cases, mismatches=mismatches)
        assert mismatches == 0
        assert d["seconds"] < 120
        anchors = [(FIB, 3, 4), (FIB, 4, -35), (LUCAS, 3, 56)]
        for params, n, want in anchors:
            assert oracle.bareiss_det(dense(params, n)) == want
            assert closed_form.det_eq3(params, n) == want


def test_c02_gn_chain(acceptance_log):
    with criterion(acceptance_log, 2, "b (b - W_{n+1})^(n-2) g_n == Bareiss") as d:
        checked = skipped = mismatches = 0
        for params, n in GridSpec().param_pairs():
            try:
                value = closed_form.det_via_gn(params, n)
            except DegenerateCaseError:
                skipped += 1
                continue
            checked += 1
            if value != oracle.bareiss_det(dense(params, n)):
                mismatches += 1
        d.update(checked=checked, skipped=skipped, mismatches=mismatches)
        assert mismatches == 0
        assert closed_form.scalars(FIB, 3).gn == -2
        assert closed_form.scalars(FIB, 4).gn == Fraction(-35, 16)


def test_c03_exact_inverse(acceptance_log):
    with criterion(acceptance_log, 3, "gauss_inverse exact and circulant, n <= 8") as d:
        checked = singular = 0
        for params, n in GridSpec(n_values=tuple(range(3, 9))).param_pairs():
            W = dense(params, n)
            try:
                inv = oracle.gauss_inverse(W)
            except SingularMatrixError:
                assert oracle.bareiss_det(W) == 0
                singular += 1
                continue
            checked += 1
            assert matmul(inv, W) == identity(n)
            assert is_circulant(inv)
        d.update(checked=checked, singular=singular)
        F = Fraction
        assert oracle.gauss_inverse(dense(FIB, 3))[0] == [F(-1, 4), F(3, 4), F(-1, 4)]
        assert oracle.gauss_inverse(dense(FIB, 4))[0] == [F(-11, 35), F(17, 35), F(-4, 35), F(3, 35)]


def test_c04_bidiagonal_lemma(acceptance_log):
    with criterion(acceptance_log, 4, "corrected bidiagonal inverse; printed residual 2 sub/diag") as d:
        rng = random.Random(20240601)
        pairs = []
        while len(pairs) < 100:
            diag = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
            if diag:
                pairs.append((diag, Fraction(rng.randint(-9, 9), rng.randint(1, 5))))
        residuals = 0
        for diag, sub in pairs:
            for m in range(1, 13):
                A, Ai = bidiagonal(diag, sub, m), bidiag_inverse(diag, sub, m)
                assert matmul(A, Ai) == identity(m)
                assert matmul(Ai, A) == identity(m)
                if sub and m >= 2:
                    R = matmul(A, audit.eval_lemma_printed(diag, sub, m))
                    for i in range(m - 1):
                        assert R[i + 1][i] == 2 * sub / diag
                    residuals += 1
        d.update(pairs=len(pairs), sizes="1..12", printed_residual_checks=residuals)


def test_c05_kl_sign_pattern(acceptance_log):
    with criterion(acceptance_log, 5, "det K, det L follow the n mod 4 sign and multiply to 1") as d:
        checked = 0
        for n in range(3, 13):
            for params in PRESETS.values():
                try:
                    bundle = decomposition.build(params, n)
                except DegenerateCaseError:
                    continue
                info = decomposition.det_KL_sign(n, bundle)
                assert info["det_K"] == info["claimed_K"]
                assert info["det_L"] == info["claimed_L"]
                assert info["product"] == 1
                assert info["multiplicative"]
                checked += 1
        d["checked"] = checked
        assert checked >= 10


def test_c06_binet(acceptance_log):
    with criterion(acceptance_log, 6, "Binet == recurrence for k <= 100") as d:
        checked = 0
        for params in default_grid_params():
            assert params.D != 0
            terms = seq_int(params, 100)
            for k in range(101):
                assert demote(binet(params, k)) == terms[k]
            checked += 1
        d["param_sets"] = checked


def test_c07_dft_oracle(acceptance_log):
    with criterion(acceptance_log, 7, "DFT det rel err < 1e-9 (n <= 32), DFT inverse within 1e-9 (n <= 16)") as d:
        worst_det = worst_inv = 0.0
        dets = invs = zero_det = 0
        for params in default_grid_params():
            for n in range(3, 33):
                if max(abs(w) for w in seq_int(params, n)[1:]) > 10**6:
                    break
                c = from_params(params, n)
                W = materialize(c)
                exact = oracle.bareiss_det(W)
                if exact == 0:
                    # relative error is undefined at det = 0
                    zero_det += 1
                    continue
                rel = abs(oracle.dft_det(c) - float(exact)) / abs(float(exact))
                worst_det = max(worst_det, rel)
                dets += 1
                if n <= 16:
                    g = oracle.gauss_inverse(W)[0]
                    f = oracle.dft_inverse(c).first_row
                    worst_inv = max(worst_inv, max(abs(float(x) - y) for x, y in zip(g, f)))
                    invs += 1
        d.update(det_cases=dets, inverse_cases=invs, zero_det_skipped=zero_det,
                 worst_det_rel=f"{worst_det:.2e}", worst_inv_abs=f"{worst_inv:.2e}")
        assert worst_det < 1e-9
        assert worst_inv < 1e-9


def test_c08_audit_integrity(acceptance_log, grid_runs):
    with criterion(acceptance_log, 8, "audit integrity, determinism, Fibonacci n=3,4 dual values") as d:
        first, second, elapsed = grid_runs
        d["grid_seconds"] = round(elapsed, 1)
        d["reports"] = len(first.reports)
        assert first.integrity_ok, first.violations[:5]
        a = audit.dumps(audit.grid_document([first])).encode()
        b = audit.dumps(audit.grid_document([second])).encode()
        assert a == b

        fib_reports = audit.run_grid(
            GridSpec((0,), (1,), (1,), (1,), (3, 4), audit.THM2_ENTRIES)
        ).reports
        for n in (3, 4):
            rows = [r for r in fib_reports if r.case.n == n and r.skipped is None]
            assert rows and all(r.printed is not None and r.oracle is not None for r in rows)
            by_pos = {audit.thm2_position(r.case.formula, n): r.oracle for r in rows}
            assert sorted(by_pos) == list(range(1, n + 1))
            assert sum(by_pos.values()) == Fraction(1, sum(seq_int(FIB, n)[1:]))
        w3 = next(r for r in fib_reports if r.case.n == 4 and r.case.formula == "THM2_W3")
        assert (w3.printed, w3.oracle) == (Fraction(4, 35), Fraction(-4, 35))

        summary = audit.summarize(first.reports, first.violations)
        documented = {e["formula"] for e in summary["errata"]}
        mismatching = {f for f in audit.THM2_ENTRIES if summary["totals"][f]["mismatch"]}
        assert mismatching <= documented
        d["thm2_entries_with_mismatches"] = len(mismatching)


def test_c09_structured_inverse(acceptance_log):
    with criterion(acceptance_log, 9, "structured inverse valid => equals gauss; invalid => diagnostic") as d:
        counts = {}
        for params, n in GridSpec().param_pairs():
            for variant in decomposition.U_VARIANTS:
                try:
                    res = decomposition.structured_inverse(params, n, u_variant=variant)
                except (SingularMatrixError, DegenerateCaseError):
                    key = (variant, "not built")
                else:
                    if res.valid:
                        assert res.P == oracle.gauss_inverse(res.bundle.W)
                        key = (variant, "valid")
                    else:
                        diag = res.diagnostic
                        assert diag is not None
                        assert {"check", "row", "col", "actual", "expected"} <= set(diag)
                        key = (variant, "invalid")
                counts[key] = counts.get(key, 0) + 1
        d.update({f"{v}:{k}": c for (v, k), c in sorted(counts.items())})


def test_c10_bench(acceptance_log):
    with criterion(acceptance_log, 10, "bench n=64 closed == Bareiss; full bench < 5 min") as d:
        t0 = time.perf_counter()
        det_report = bench.bench_det(FIB, (8, 16, 32, 64), repeat=3)
        inv_report = bench.bench_inverse(FIB, (6, 8, 12, 16), repeat=3)
        d["bench_seconds"] = round(time.perf_counter() - t0, 1)
        rows = {(r.method, r.n): r for r in det_report.rows}
        closed, bareiss = rows["closed", 64], rows["bareiss", 64]
        assert closed.validated and bareiss.validated
        assert closed.value_digest == bareiss.value_digest
        ratio = det_report.to_json()["ratio_bareiss_over_closed"]["64"]
        d["ratio_bareiss_over_closed_n64"] = round(ratio, 1)
        assert all(r.validated for r in det_report.rows)
        assert all(r.validated for r in inv_report.rows if r.method != "structured")
        assert d["bench_seconds"] < 300
