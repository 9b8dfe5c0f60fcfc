"""Reduction ``K @ W @ L = M`` (Hessenberg) and ``M @ U = H (+) A``, and the inverse
``W^-1 = (L @ U) @ (H^-1 (+) A^-1) @ K`` built from it.

All indices below are 0-based.  ``c = first_row`` with ``c[k] = W_{k+1}`` and
``r = q (W_n - W_0) / (W_1 - W_{n+1})``.

K (rows combine rows of W so the recurrence cancels everything but two entries):
    row 0        e_0
    row 1        -W_2/W_1 at col 0, 1 at col n-1
    row 2        -q at col 0, 1 at col n-2, -p at col n-1
    row i >= 3   1, -p, -q at cols n-i, n-i+1, n-i+2
  The interior rows continue the (1, -p, -q) stencil one column left per row,
  which is the only extension agreeing with the displayed rows 3 and n-2, n-1.
  Row 2 is the same stencil wrapped cyclically.

L
    col 0        e_0
    col 1        r**(n-1-i) in row i >= 1 (so r**(n-2) in row 1, 1 in row n-1)
    col j >= 2   1 in row n-j (reversal of the remaining columns)

U  identity except rows 0 and 1:
    U[0][1] = -g'/W_1
    U[0][j] = g'/(g W_1) * (W_2 W_{n-j+1}/W_1 - W_{n-j+2}) - W_{n-j+1}/W_1,  j >= 2
    U[1][j] = (W_{n-j+2} - W_2 W_{n-j+1}/W_1) / g,                          j >= 2
  With these signs row 1 of ``M @ U`` is ``2 * M[1]`` rather than ``e_1``; the
  ``"corrected"`` variant negates the ``U[1][j]`` entries and the ``g'`` term of
  ``U[0][j]``, which does produce ``H (+) A``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .circulant import (
    Circulant,
    Matrix,
    direct_sum,
    first_difference,
    from_params,
    identity,
    is_circulant,
    materialize,
    matmul,
    zeros,
)
from .closed_form import bidiag_inverse, bidiagonal, scalars
from .errors import DegenerateCaseError, SingularMatrixError
from .horadam import HoradamParams, seq_int
from .oracle import bareiss_det

U_VARIANTS = ("printed", "corrected")


@dataclass
class DecompositionBundle:
    params: HoradamParams
    n: int
    q_sym: int
    K: Matrix
    L: Matrix
    U: Matrix
    H: Matrix
    A: Matrix
    M: Matrix
    W: Matrix
    u_variant: str = "printed"
    valid: dict = field(default_factory=dict)


def _terms(params: HoradamParams, n: int) -> list[Fraction]:
    return [Fraction(w) for w in seq_int(params, n + 2)]


def build_K(W: list[Fraction], n: int, p: int, q: int) -> Matrix:
    K = zeros(n, n)
    K[0][0] = Fraction(1)
    K[1][0] = -W[2] / W[1]
    K[1][n - 1] = Fraction(1)
    if n > 2:
        K[2][0] = Fraction(-q)
        K[2][n - 2] = Fraction(1)
        K[2][n - 1] = Fraction(-p)
    for i in range(3, n):
        K[i][n - i] = Fraction(1)
        K[i][n - i + 1] = Fraction(-p)
        K[i][n - i + 2] = Fraction(-q)
    return K


def build_L(n: int, r: Fraction) -> Matrix:
    L = zeros(n, n)
    L[0][0] = Fraction(1)
    for i in range(1, n):
        L[i][1] = r ** (n - 1 - i)
    for j in range(2, n):
        L[n - j][j] = Fraction(1)
    return L


def build_U(W: list[Fraction], n: int, gn: Fraction, gnp: Fraction, variant: str = "printed") -> Matrix:
    if variant not in U_VARIANTS:
        raise ValueError(f"unknown U variant {variant!r}")
    s = 1 if variant == "printed" else -1
    U = identity(n)
    U[0][1] = -gnp / W[1]
    for j in range(2, n):
        # 1-based column j+1 of the displayed U
        top = W[n - j + 1]
        nxt = W[n - j + 2]
        U[0][j] = s * gnp / (gn * W[1]) * (W[2] * top / W[1] - nxt) - top / W[1]
        U[1][j] = s * (nxt - W[2] * top / W[1]) / gn
    return U


def build(
    params: HoradamParams,
    n: int,
    *,
    q_sym: int | None = None,
    u_variant: str = "printed",
) -> DecompositionBundle:
    """Construct K, L, U, H, A and ``M = K @ W @ L`` exactly.

    Raises :class:`DegenerateCaseError` for ``W_1 = 0``, ``W_1 = W_{n+1}`` or
    ``g_n = 0`` since each of those is a denominator somewhere in K, L or U.
    """
    q = params.q if q_sym is None else q_sym
    s = scalars(params, n, q_sym=q)
    if s.gn == 0:
        raise DegenerateCaseError("g_n", f"n={n}")
    W = _terms(params, n)
    Wmat = materialize(from_params(params, n))
    K = build_K(W, n, params.p, q)
    L = build_L(n, s.ratio)
    U = build_U(W, n, s.gn, s.gn_prime, u_variant)
    H = [[W[1], Fraction(0)], [Fraction(0), s.gn]]
    A = bidiagonal(s.diag, s.sub, n - 2)
    M = matmul(matmul(K, Wmat), L)
    bundle = DecompositionBundle(
        params=params, n=n, q_sym=q, K=K, L=L, U=U, H=H, A=A, M=M, W=Wmat,
        u_variant=u_variant,
    )
    bundle.valid["hessenberg"] = all(
        r["pass"] for r in verify_hessenberg(bundle).values()
    )
    bundle.valid["direct_sum"] = matmul(M, U) == direct_sum(H, A)
    return bundle


def expected_M(bundle: DecompositionBundle) -> Matrix:
    """M as displayed: first two rows, then bidiagonal block from row 2 on."""
    params, n = bundle.params, bundle.n
    s = scalars(params, n, q_sym=bundle.q_sym)
    W = _terms(params, n)
    E = zeros(n, n)
    E[0][0] = W[1]
    E[0][1] = s.gn_prime
    E[1][1] = s.gn
    for j in range(2, n):
        E[0][j] = W[n - j + 1]
        E[1][j] = W[n - j + 2] - W[2] * W[n - j + 1] / W[1]
    for i in range(2, n):
        E[i][i] = s.diag
        if i >= 3:
            E[i][i - 1] = s.sub
    return E


def _regions(n: int) -> dict[str, list[tuple[int, int]]]:
    regions: dict[str, list[tuple[int, int]]] = {
        "row0": [(0, j) for j in range(n)],
        "row1": [(1, j) for j in range(n)],
        "diagonal": [(i, i) for i in range(2, n)],
        "subdiagonal": [(i, i - 1) for i in range(3, n)],
    }
    claimed = {cell for cells in regions.values() for cell in cells}
    regions["zeros"] = [
        (i, j) for i in range(2, n) for j in range(n) if (i, j) not in claimed
    ]
    return regions


def verify_hessenberg(bundle: DecompositionBundle) -> dict[str, dict]:
    """Compare computed ``M`` with the displayed form region by region."""
    E = expected_M(bundle)
    M = bundle.M
    report = {}
    for name, cells in _regions(bundle.n).items():
        bad = next(((i, j) for i, j in cells if M[i][j] != E[i][j]), None)
        report[name] = {
            "pass": bad is None,
            "first_offending": None
            if bad is None
            else {
                "row": bad[0],
                "col": bad[1],
                "expected": str(E[bad[0]][bad[1]]),
                "actual": str(M[bad[0]][bad[1]]),
            },
        }
    return report


def claimed_KL_sign(n: int) -> int:
    """``+1`` for ``n = 1, 2 (mod 4)``, ``-1`` for ``n = 0, 3 (mod 4)``."""
    return 1 if n % 4 in (1, 2) else -1


def det_KL(bundle: DecompositionBundle) -> tuple[Fraction, Fraction]:
    return bareiss_det(bundle.K), bareiss_det(bundle.L)


def det_KL_sign(n: int, bundle: DecompositionBundle | None = None) -> dict:
    """Claimed sign of ``det K`` and ``det L``; with a bundle, also the exact values."""
    if n < 3:
        raise ValueError("n must be >= 3")
    out: dict = {"n": n, "claimed_K": claimed_KL_sign(n), "claimed_L": claimed_KL_sign(n)}
    if bundle is not None:
        dK, dL = det_KL(bundle)
        dW = bareiss_det(bundle.W)
        out.update(
            det_K=dK,
            det_L=dL,
            product=dK * dL,
            multiplicative=bareiss_det(bundle.M) == dK * dW * dL,
        )
    return out


@dataclass
class StructuredInverse:
    circulant: Circulant | None
    P: Matrix
    valid: bool
    diagnostic: dict | None = None
    bundle: DecompositionBundle | None = None


def structured_inverse(
    params: HoradamParams,
    n: int,
    *,
    q_sym: int | None = None,
    u_variant: str = "printed",
) -> StructuredInverse:
    """``P = (L @ U) @ (H^-1 (+) A^-1) @ K``, checked against ``P @ W = I``.

    Never falls back to another method: if the check fails the result carries
    ``valid=False`` and the first entry of ``P @ W`` that differs from ``I``.
    """
    try:
        bundle = build(params, n, q_sym=q_sym, u_variant=u_variant)
    except DegenerateCaseError as exc:
        if exc.denominator == "g_n":
            # W_1 != 0 and W_1 != W_{n+1} here, so det W = 0 exactly when g_n = 0
            raise SingularMatrixError(f"singular: g_n = 0 at n={n}") from exc
        raise
    s = scalars(params, n, q_sym=bundle.q_sym)
    H_inv = [[1 / bundle.H[0][0], Fraction(0)], [Fraction(0), 1 / bundle.H[1][1]]]
    A_inv = bidiag_inverse(s.diag, s.sub, n - 2)
    T = matmul(bundle.L, bundle.U)
    P = matmul(matmul(T, direct_sum(H_inv, A_inv)), bundle.K)

    prod = matmul(P, bundle.W)
    diff = first_difference(prod, identity(n))
    if diff is not None:
        i, j, got, want = diff
        return StructuredInverse(
            None, P, False,
            {"check": "P @ W == I", "row": i, "col": j,
             "actual": str(got), "expected": str(want)},
            bundle,
        )
    if not is_circulant(P):
        i, j = next(
            (i, j) for i in range(n) for j in range(n) if P[i][j] != P[0][(j - i) % n]
        )
        return StructuredInverse(
            None, P, False,
            {"check": "P is circulant", "row": i, "col": j,
             "actual": str(P[i][j]), "expected": str(P[0][(j - i) % n])},
            bundle,
        )
    return StructuredInverse(Circulant(P[0]), P, True, None, bundle)
