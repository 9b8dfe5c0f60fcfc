"""Circulant matrices stored by first row, plus the dense helpers used around them.

Row ``i`` of the materialized matrix at column ``j`` is ``first_row[(j - i) % n]``,
so row 1 reads ``(c_{n-1}, c_0, ..., c_{n-2})``.  For a Horadam circulant,
``first_row[k] = W_{k+1}`` (0-based storage, 1-based sequence index).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DimensionError
from .exact_arith import rat
from .horadam import HoradamParams, seq_int

Matrix = list[list[Fraction]]


@dataclass(frozen=True)
class Circulant:
    first_row: tuple

    def __init__(self, first_row: Sequence):
        if len(first_row) == 0:
            raise DimensionError("a circulant needs n >= 1")
        row = tuple(x if isinstance(x, (complex, float)) else rat(x) for x in first_row)
        object.__setattr__(self, "first_row", row)

    @property
    def n(self) -> int:
        return len(self.first_row)

    def row_sum(self):
        return sum(self.first_row)

    def materialize(self) -> Matrix:
        return materialize(self)

    def to_json(self) -> dict:
        return {"n": self.n, "first_row": [str(x) for x in self.first_row]}

    @classmethod
    def from_json(cls, obj: dict) -> Circulant:
        row = [Fraction(s) for s in obj["first_row"]]
        if len(row) != obj["n"]:
            raise DimensionError("first_row length disagrees with n")
        return cls(row)

    def __str__(self) -> str:
        return "circ(" + ", ".join(str(x) for x in self.first_row) + ")"


def from_params(params: HoradamParams, n: int) -> Circulant:
    """``circ(W_1, ..., W_n)``."""
    if n < 1:
        raise DimensionError("n must be >= 1")
    return Circulant(seq_int(params, n)[1 : n + 1])


def materialize(c: Circulant) -> Matrix:
    n, r = c.n, c.first_row
    return [[r[(j - i) % n] for j in range(n)] for i in range(n)]


def conv_mul(x: Circulant, y: Circulant) -> Circulant:
    """First row of ``circ(x) @ circ(y)``: the cyclic convolution of the rows."""
    if x.n != y.n:
        raise DimensionError(f"cannot multiply circulants of size {x.n} and {y.n}")
    n, xr, yr = x.n, x.first_row, y.first_row
    return Circulant([sum(xr[i] * yr[(k - i) % n] for i in range(n)) for k in range(n)])


def is_circulant(m: Matrix) -> bool:
    """True when every row is the cyclic right-shift of the row above."""
    n = len(m)
    if any(len(row) != n for row in m):
        return False
    return all(m[i][j] == m[0][(j - i) % n] for i in range(n) for j in range(n))


# -- dense helpers ------------------------------------------------------------


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def zeros(rows: int, cols: int) -> Matrix:
    return [[Fraction(0)] * cols for _ in range(rows)]


def matmul(x: Matrix, y: Matrix) -> Matrix:
    if not x or not y:
        raise DimensionError("empty matrix")
    inner = len(y)
    if any(len(row) != inner for row in x):
        raise DimensionError("inner dimensions differ")
    cols = list(zip(*y))
    return [
        [sum((a * b for a, b in zip(row, col) if a and b), Fraction(0)) for col in cols]
        for row in x
    ]


def transpose(m: Matrix) -> Matrix:
    return [list(col) for col in zip(*m)]


def direct_sum(x: Matrix, y: Matrix) -> Matrix:
    r1, c1 = len(x), len(x[0]) if x else 0
    r2, c2 = len(y), len(y[0]) if y else 0
    out = zeros(r1 + r2, c1 + c2)
    for i in range(r1):
        out[i][:c1] = x[i]
    for i in range(r2):
        out[r1 + i][c1:] = y[i]
    return out


def first_difference(x: Matrix, y: Matrix):
    """``(i, j, x_ij, y_ij)`` of the first differing entry in row-major order, else None."""
    for i, (rx, ry) in enumerate(zip(x, y)):
        for j, (a, b) in enumerate(zip(rx, ry)):
            if a != b:
                return i, j, a, b
    return None
