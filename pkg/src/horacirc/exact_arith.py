"""Exact scalars: rationals and elements of a quadratic field Q(sqrt(D)).

Rationals are plain :class:`fractions.Fraction` values, which are always kept
in lowest terms with a positive denominator.  :class:`QuadExt` is authored
here since it carries the discriminant alongside each value.
"""

from __future__ import annotations

import math
import operator
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import DiscriminantMismatchError, IrrationalResidueError

Rational = Fraction
RationalLike = Union[int, Fraction]

_OPS = {
    "add": operator.add,
    "sub": operator.sub,
    "mul": operator.mul,
    "div": operator.truediv,
}


def rat(x: RationalLike | str) -> Fraction:
    """Coerce ints, Fractions and ``"n"``/``"n/d"`` strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def rat_arith(x: RationalLike, y: RationalLike, op: str) -> Fraction:
    """Exact ``x op y``; ``op`` is one of add, sub, mul, div.

    Division by zero raises :class:`ZeroDivisionError`.
    """
    try:
        fn = _OPS[op]
    except KeyError:
        raise ValueError(f"unknown op {op!r}") from None
    return fn(rat(x), rat(y))


def format_rational(x: RationalLike) -> str:
    return str(rat(x))


def parse_rational(s: str) -> Fraction:
    return Fraction(s.strip())


def is_perfect_square(d: int) -> bool:
    return d >= 0 and math.isqrt(d) ** 2 == d


@dataclass(frozen=True)
class QuadExt:
    """The number ``u + v*sqrt(D)`` with rational ``u``, ``v`` and integer ``D``."""

    u: Fraction
    v: Fraction
    D: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "u", rat(self.u))
        object.__setattr__(self, "v", rat(self.v))
        if not isinstance(self.D, int) or isinstance(self.D, bool):
            raise TypeError("discriminant must be an int")
        if self.v and is_perfect_square(self.D):
            # sqrt(D) is rational: keep a single canonical representative
            object.__setattr__(self, "u", self.u + self.v * math.isqrt(self.D))
            object.__setattr__(self, "v", Fraction(0))

    @classmethod
    def sqrt(cls, D: int) -> QuadExt:
        return cls(Fraction(0), Fraction(1), D)

    @classmethod
    def from_rational(cls, x: RationalLike, D: int) -> QuadExt:
        return cls(rat(x), Fraction(0), D)

    def _coerce(self, other: object) -> QuadExt:
        if isinstance(other, QuadExt):
            if other.D != self.D:
                raise DiscriminantMismatchError(
                    f"cannot combine sqrt({self.D}) with sqrt({other.D})"
                )
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return QuadExt(Fraction(other), Fraction(0), self.D)
        return NotImplemented

    def conjugate(self) -> QuadExt:
        return QuadExt(self.u, -self.v, self.D)

    def norm(self) -> Fraction:
        """``u**2 - D*v**2``, i.e. the product with the conjugate."""
        return self.u * self.u - self.D * self.v * self.v

    def is_zero(self) -> bool:
        return self.u == 0 and self.v == 0

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadExt(self.u + o.u, self.v + o.v, self.D)

    __radd__ = __add__

    def __neg__(self) -> QuadExt:
        return QuadExt(-self.u, -self.v, self.D)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadExt(self.u - o.u, self.v - o.v, self.D)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadExt(
            self.u * o.u + self.D * self.v * o.v,
            self.u * o.v + o.u * self.v,
            self.D,
        )

    __rmul__ = __mul__

    def inverse(self) -> QuadExt:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero element of Q(sqrt(D))")
        return QuadExt(self.u / n, -self.v / n, self.D)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, k: int) -> QuadExt:
        if k < 0:
            return self.inverse() ** (-k)
        result = QuadExt(Fraction(1), Fraction(0), self.D)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def demote(self) -> Fraction:
        """Return the exact rational value, or raise if an irrational part remains."""
        if self.v == 0:
            return self.u
        raise IrrationalResidueError(
            f"{self.v}*sqrt({self.D}) has no rational value"
        )

    def to_json(self) -> dict:
        return {"u": str(self.u), "v": str(self.v), "D": self.D}

    @classmethod
    def from_json(cls, obj: dict) -> QuadExt:
        return cls(Fraction(obj["u"]), Fraction(obj["v"]), int(obj["D"]))

    def __str__(self) -> str:
        return f"{self.u} + {self.v}*sqrt({self.D})"


def quad_arith(x: QuadExt, y: QuadExt, op: str) -> QuadExt:
    try:
        fn = _OPS[op]
    except KeyError:
        raise ValueError(f"unknown op {op!r}") from None
    return fn(x, y)


def demote(x: QuadExt) -> Fraction:
    return x.demote()
