"""Closed-form determinant of ``circ(W_1, ..., W_n)`` and the scalars behind it.

Every function takes an optional ``q_sym``: the value substituted for ``q``
inside the formulas.  It defaults to ``params.q``; the audit passes a different
value to test the formulas under the ``W_k = p*W_{k-1} - q*W_{k-2}`` reading.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .circulant import Matrix, zeros
from .errors import DegenerateCaseError, DimensionError
from .horadam import HoradamParams, seq_int


@dataclass(frozen=True)
class HessenbergScalars:
    gn: Fraction
    gn_prime: Fraction
    diag: Fraction  # W_1 - W_{n+1}
    sub: Fraction  # q*(W_0 - W_n)

    @property
    def ratio(self) -> Fraction:
        """``q*(W_n - W_0) / (W_1 - W_{n+1})``, the common ratio in ``L`` and ``g_n``."""
        return -self.sub / self.diag


def _check_n(n: int) -> None:
    if n < 3:
        raise DimensionError(f"closed forms need n >= 3, got n={n}")


def det_eq3(params: HoradamParams, n: int, *, q_sym: int | None = None) -> Fraction:
    """Determinant of ``circ(W_1..W_n)`` from the division-free closed form.

    ``(b^2 - W_2 W_n) x^{n-2} + sum_{k=2}^{n-1} (b W_{k+1} - W_2 W_k) x^{k-2} y^{n-k}``
    with ``x = b - W_{n+1}`` and ``y = q W_n - q a``.  Costs O(n) multiplications.
    """
    _check_n(n)
    q = params.q if q_sym is None else q_sym
    W = seq_int(params, n + 1)
    b = W[1]
    x = b - W[n + 1]
    y = q * W[n] - q * params.a

    acc = 0
    xp = 1
    for k in range(2, n):
        acc = acc * y + (b * W[k + 1] - W[2] * W[k]) * xp
        xp *= x
    # acc holds sum t_k x^{k-2} y^{n-1-k}; xp is now x^{n-2}
    return Fraction((b * b - W[2] * W[n]) * xp + acc * y)


def scalars(params: HoradamParams, n: int, *, q_sym: int | None = None) -> HessenbergScalars:
    _check_n(n)
    q = params.q if q_sym is None else q_sym
    W = [Fraction(w) for w in seq_int(params, n + 1)]
    if W[1] == 0:
        raise DegenerateCaseError("W_1", f"a={params.a}, b={params.b}")
    diag = W[1] - W[n + 1]
    if diag == 0:
        raise DegenerateCaseError("W_1 - W_{n+1}", f"n={n}")
    sub = q * (W[0] - W[n])
    r = -sub / diag

    gn = W[1] - W[2] * W[n] / W[1]
    for k in range(2, n):
        gn += (W[k + 1] - W[2] * W[k] / W[1]) * r ** (n - k)
    gn_prime = sum((W[k] * r ** (n - k) for k in range(2, n + 1)), Fraction(0))
    return HessenbergScalars(gn=gn, gn_prime=gn_prime, diag=diag, sub=sub)


def det_via_gn(params: HoradamParams, n: int, *, q_sym: int | None = None) -> Fraction:
    """``b * (b - W_{n+1})**(n-2) * g_n``."""
    s = scalars(params, n, q_sym=q_sym)
    return params.b * s.diag ** (n - 2) * s.gn


def bidiagonal(diag, sub, m: int) -> Matrix:
    """The ``m x m`` lower-bidiagonal matrix with ``diag`` on the diagonal and
    ``sub`` directly below it."""
    out = zeros(m, m)
    for i in range(m):
        out[i][i] = Fraction(diag)
        if i:
            out[i][i - 1] = Fraction(sub)
    return out


def bidiag_inverse(diag, sub, m: int) -> Matrix:
    """Inverse of :func:`bidiagonal`: entry ``(i, j)``, ``i >= j``, is
    ``(-sub)**(i-j) / diag**(i-j+1)``."""
    diag, sub = Fraction(diag), Fraction(sub)
    if diag == 0:
        raise DegenerateCaseError("diagonal", "bidiagonal matrix is singular")
    if m < 0:
        raise DimensionError("m must be >= 0")
    # entries depend only on i - j; build the column once
    col = [1 / diag]
    for _ in range(1, m):
        col.append(col[-1] * (-sub) / diag)
    out = zeros(m, m)
    for i in range(m):
        for j in range(i + 1):
            out[i][j] = col[i - j]
    return out
