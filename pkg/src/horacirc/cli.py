"""``horacirc`` command line.

Exit codes: 0 success, 1 audit integrity failure, 2 usage, 3 degenerate
denominator, 4 singular matrix.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import audit, bench, closed_form, decomposition, oracle
from .circulant import from_params, materialize
from .errors import (
    DegenerateCaseError,
    DimensionError,
    RepeatedRootError,
    SingularMatrixError,
)
from .exact_arith import demote
from .horadam import PRESETS, HoradamParams, binet, seq_int

EXIT_OK, EXIT_INTEGRITY, EXIT_USAGE, EXIT_DEGENERATE, EXIT_SINGULAR = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


def _emit_json(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=1) + "\n")


def _fmt_float(x: float) -> str:
    return f"{x:.12g}"


def _params(args) -> HoradamParams:
    explicit = {k: getattr(args, k) for k in "abpq"}
    if args.preset:
        base = PRESETS[args.preset].as_dict()
        base.update({k: v for k, v in explicit.items() if v is not None})
        return HoradamParams(**base)
    missing = [k for k, v in explicit.items() if v is None]
    if missing:
        raise UsageError(
            "give --preset or all of --a --b --p --q (missing: "
            + ", ".join("--" + k for k in missing) + ")"
        )
    return HoradamParams(**explicit)


def _add_param_args(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("sequence parameters")
    g.add_argument("--preset", choices=sorted(PRESETS))
    for name, sym in (("a", "W_0"), ("b", "W_1"), ("p", "p"), ("q", "q")):
        g.add_argument(f"--{name}", type=int, help=f"{sym}; overrides the preset")


def _int_list(text: str) -> tuple[int, ...]:
    """``"1,2,5"`` or an inclusive range ``"-2:2"``."""
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if ":" in part[1:]:
            i = part.index(":", 1)
            lo, hi = int(part[:i]), int(part[i + 1:])
            out.extend(range(lo, hi + 1))
        elif part:
            out.append(int(part))
    return tuple(out)


# -- commands -------------------------------------------------------------------


def cmd_seq(args) -> int:
    params = _params(args)
    if args.count < 0:
        raise UsageError("--count must be >= 0")
    if args.method == "binet":
        terms = [demote(binet(params, k)) for k in range(args.count + 1)]
    else:
        terms = seq_int(params, args.count)
    if args.json:
        _emit_json({"params": params.as_dict(), "method": args.method,
                    "terms": [str(t) for t in terms]})
    else:
        print(" ".join(str(t) for t in terms))
    return EXIT_OK


def cmd_det(args) -> int:
    params = _params(args)
    n = args.n
    if n < 1:
        raise UsageError("--n must be >= 1")
    if args.method in ("closed", "gn") and n < 3:
        raise UsageError(f"--method {args.method} needs --n >= 3")
    if args.method == "closed":
        value = closed_form.det_eq3(params, n)
    elif args.method == "gn":
        value = closed_form.det_via_gn(params, n)
    elif args.method == "bareiss":
        value = oracle.bareiss_det(materialize(from_params(params, n)))
    else:
        z = oracle.dft_det(from_params(params, n))
        if args.json:
            _emit_json({"params": params.as_dict(), "n": n, "method": args.method,
                        "value": z.real, "imag": z.imag})
        else:
            print(_fmt_float(z.real))
        return EXIT_OK
    if args.json:
        _emit_json({"params": params.as_dict(), "n": n, "method": args.method,
                    "value": str(value)})
    else:
        print(value)
    return EXIT_OK


def cmd_inv(args) -> int:
    params = _params(args)
    n = args.n
    if n < 1:
        raise UsageError("--n must be >= 1")
    base = {"params": params.as_dict(), "n": n, "method": args.method}
    if args.method == "gauss":
        row = oracle.gauss_inverse(materialize(from_params(params, n)))[0]
        if args.json:
            _emit_json({**base, "first_row": [str(x) for x in row]})
        else:
            print(" ".join(str(x) for x in row))
    elif args.method == "dft":
        row = oracle.dft_inverse(from_params(params, n)).first_row
        if args.json:
            _emit_json({**base, "first_row": list(row)})
        else:
            print(" ".join(_fmt_float(x) for x in row))
    elif args.method == "structured":
        if n < 3:
            raise UsageError("--method structured needs --n >= 3")
        res = decomposition.structured_inverse(params, n, u_variant=args.u_variant)
        row = res.P[0]
        if args.json:
            _emit_json({**base, "u_variant": args.u_variant, "valid": res.valid,
                        "first_row": [str(x) for x in row],
                        "diagnostic": res.diagnostic})
        else:
            print(" ".join(str(x) for x in row))
            print(f"valid={str(res.valid).lower()}")
            if res.diagnostic:
                d = res.diagnostic
                print(f"first failure: {d['check']} at ({d['row']}, {d['col']}): "
                      f"got {d['actual']}, expected {d['expected']}")
    else:  # printed
        if n < 3:
            raise UsageError("--method printed needs --n >= 3")
        entries = []
        for which in audit.THM2_ENTRIES:
            k = audit.thm2_position(which, n)
            if k > n:
                continue
            entries.append((which, k, audit.eval_thm2_entry(params, n, which)))
        if args.json:
            _emit_json({**base, "entries": [
                {"formula": f, "position": k, "value": str(v)} for f, k, v in entries
            ]})
        else:
            for f, k, v in entries:
                label = f"w_n = w_{k}" if f == "THM2_WN" else f"w_{k}"
                print(f"{label} = {v}")
    return EXIT_OK


def _grid_specs(args) -> list[audit.GridSpec]:
    if args.preset:
        pr = PRESETS[args.preset]
        a_v, b_v, p_v, q_v = (pr.a,), (pr.b,), (pr.p,), (pr.q,)
    else:
        a_v, b_v = _int_list(args.a_values), _int_list(args.b_values)
        p_v, q_v = _int_list(args.p_values), _int_list(args.q_values)
    if args.n_min < 3 or args.n_max < args.n_min:
        raise UsageError("need 3 <= --n-min <= --n-max")
    formulas = tuple(args.formula) if args.formula else audit.FORMULAS
    conventions = audit.CONVENTIONS if args.convention == "both" else (args.convention,)
    try:
        return [
            audit.GridSpec(a_v, b_v, p_v, q_v, tuple(range(args.n_min, args.n_max + 1)),
                           formulas, c)
            for c in conventions
        ]
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _print_summary(doc: dict) -> None:
    for run in doc["runs"]:
        print(f"convention: {run['grid']['convention']}")
        print(f"{'formula':<26}{'match':>8}{'mismatch':>10}{'skipped':>9}{'rate':>9}")
        for f, t in run["summary"]["totals"].items():
            rate = "-" if t["match_rate"] is None else f"{100 * t['match_rate']:.1f}%"
            print(f"{f:<26}{t['match']:>8}{t['mismatch']:>10}{t['skipped']:>9}{rate:>9}")
        for e in run["summary"]["errata"]:
            print(f"  {e['id']} {e['formula']}: {e['status']} "
                  f"({e['mismatch']}/{e['evaluated']}) {e['description']}")
        integ = run["summary"]["integrity"]
        print("integrity: " + ("ok" if integ["ok"] else f"FAILED ({len(integ['violations'])})"))


def cmd_audit(args) -> int:
    results = [audit.run_grid(spec, workers=args.workers) for spec in _grid_specs(args)]
    doc = audit.grid_document(results)
    if args.out:
        Path(args.out).write_text(audit.dumps(doc), encoding="utf-8")
    if args.json:
        _emit_json({
            "runs": [{"grid": r["grid"], "summary": r["summary"]} for r in doc["runs"]],
            "integrity_ok": doc["integrity_ok"],
        })
    else:
        _print_summary(doc)
        if args.out:
            print(f"report written to {args.out}")
    return EXIT_OK if doc["integrity_ok"] else EXIT_INTEGRITY


def cmd_bench(args) -> int:
    params = _params(args) if (args.preset or args.a is not None) else PRESETS["fibonacci"]
    sizes = _int_list(args.sizes) if args.sizes else ()
    if any(n < 3 for n in sizes):
        raise UsageError("--sizes must all be >= 3")
    if args.repeat < 1:
        raise UsageError("--repeat must be >= 1")
    methods = tuple(m.strip() for m in args.methods.split(",")) if args.methods else None
    try:
        if args.kind == "det":
            report = bench.bench_det(params, sizes, args.repeat,
                                     methods or bench.DEFAULT_DET_METHODS)
        else:
            report = bench.bench_inverse(params, sizes, args.repeat,
                                         methods or bench.INV_METHODS)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if args.out:
        out = Path(args.out)
        out.write_text(report.to_csv(), encoding="utf-8")
        out.with_suffix(".json").write_text(
            json.dumps(report.to_json(), indent=1) + "\n", encoding="utf-8"
        )
    if args.json:
        _emit_json(report.to_json())
    elif not args.out:
        sys.stdout.write(report.to_csv())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="horacirc",
        description="Exact determinants and inverses of Horadam circulant matrices.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("seq", help="print W_0 .. W_count")
    _add_param_args(p)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--method", choices=("recurrence", "binet"), default="recurrence")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_seq)

    p = sub.add_parser("det", help="determinant of circ(W_1..W_n)")
    _add_param_args(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--method", choices=("closed", "gn", "bareiss", "dft"), default="closed")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_det)

    p = sub.add_parser("inv", help="first row of the inverse of circ(W_1..W_n)")
    _add_param_args(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--method", choices=("gauss", "structured", "printed", "dft"), default="gauss")
    p.add_argument("--u-variant", choices=decomposition.U_VARIANTS, default="printed",
                   help="U matrix used by --method structured")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_inv)

    p = sub.add_parser("audit", help="check printed formulas against oracles over a grid")
    p.add_argument("--preset", choices=sorted(PRESETS), help="restrict the grid to one preset")
    p.add_argument("--a-values", default="-2:2", help="list or range, e.g. --a-values=-2:2")
    p.add_argument("--b-values", default="-2,-1,1,2")
    p.add_argument("--p-values", default="1:3")
    p.add_argument("--q-values", default="1:3")
    p.add_argument("--n-min", type=int, default=3)
    p.add_argument("--n-max", type=int, default=10)
    p.add_argument("--formula", action="append", choices=audit.FORMULAS)
    p.add_argument("--convention", choices=(*audit.CONVENTIONS, "both"), default="plus-q")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", help="write the full JSON report here")
    p.add_argument("--json", action="store_true", help="print the summary as JSON")
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("bench", help="time determinant or inverse strategies")
    p.add_argument("kind", choices=("det", "inverse"))
    _add_param_args(p)
    p.add_argument("--sizes", default=None, help="comma list; default 8,16,32,64 (det) or 6,8,12,16")
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--methods", help="comma list of methods to time")
    p.add_argument("--out", help="CSV path; a JSON mirror is written next to it")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_bench)
    return parser


DEFAULT_SIZES = {"det": "8,16,32,64", "inverse": "6,8,12,16"}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "bench" and args.sizes is None:
        args.sizes = DEFAULT_SIZES[args.kind]
    try:
        return args.func(args)
    except RepeatedRootError as exc:
        print(f"horacirc: repeated root: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, DimensionError) as exc:
        print(f"horacirc: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DegenerateCaseError as exc:
        print(f"horacirc: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except SingularMatrixError as exc:
        print(f"horacirc: {exc}", file=sys.stderr)
        return EXIT_SINGULAR


if __name__ == "__main__":
    sys.exit(main())
