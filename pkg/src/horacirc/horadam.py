"""Horadam sequences ``W_k = p*W_{k-1} + q*W_{k-2}`` with ``W_0 = a``, ``W_1 = b``."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import RepeatedRootError
from .exact_arith import QuadExt


@dataclass(frozen=True, order=True)
class HoradamParams:
    a: int
    b: int
    p: int
    q: int

    @property
    def D(self) -> int:
        """Discriminant of ``x**2 - p*x - q``."""
        return self.p * self.p + 4 * self.q

    def with_q(self, q: int) -> HoradamParams:
        return HoradamParams(self.a, self.b, self.p, q)

    def as_dict(self) -> dict:
        return {"a": self.a, "b": self.b, "p": self.p, "q": self.q}


PRESETS = {
    "fibonacci": HoradamParams(0, 1, 1, 1),
    "lucas": HoradamParams(2, 1, 1, 1),
    "pell": HoradamParams(0, 1, 2, 1),
    "pell-lucas": HoradamParams(2, 2, 2, 1),
}


def preset(name: str) -> HoradamParams:
    try:
        return PRESETS[name]
    except KeyError:
        raise ValueError(
            f"unknown preset {name!r}; choose from {', '.join(PRESETS)}"
        ) from None


def seq_int(params: HoradamParams, upto: int) -> list[int]:
    """``[W_0, ..., W_upto]`` as Python ints."""
    if upto < 0:
        raise ValueError("upto must be >= 0")
    out = [params.a, params.b]
    for _ in range(2, upto + 1):
        out.append(params.p * out[-1] + params.q * out[-2])
    return out[: upto + 1]


def seq(params: HoradamParams, upto: int) -> list[Fraction]:
    return [Fraction(w) for w in seq_int(params, upto)]


def roots(params: HoradamParams) -> tuple[QuadExt, QuadExt]:
    """``(alpha, beta) = ((p + sqrt D)/2, (p - sqrt D)/2)``."""
    D = params.D
    s = QuadExt.sqrt(D)
    return (params.p + s) / 2, (params.p - s) / 2


def binet(params: HoradamParams, k: int) -> QuadExt:
    """``W_k = (A*alpha**k + B*beta**k) / (alpha - beta)`` evaluated exactly."""
    if params.D == 0:
        raise RepeatedRootError(
            f"p^2 + 4q = 0 for p={params.p}, q={params.q}: roots coincide"
        )
    if k < 0:
        raise ValueError("k must be >= 0")
    alpha, beta = roots(params)
    A = params.b - params.a * beta
    B = params.a * alpha - params.b
    return (A * alpha**k + B * beta**k) / (alpha - beta)
