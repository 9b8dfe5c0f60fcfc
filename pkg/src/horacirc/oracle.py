"""Independent ground truth: exact dense determinant/inverse and float DFT results.

None of these routines know anything about Horadam sequences; they are the
brute-force side that closed forms get checked against.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .circulant import Circulant, Matrix, identity
from .errors import DimensionError, NumericallySingularError, SingularMatrixError

DEFAULT_SINGULAR_RTOL = 1e-12


def _check_square(m: Matrix) -> int:
    n = len(m)
    if n == 0 or any(len(row) != n for row in m):
        raise DimensionError("expected a non-empty square matrix")
    return n


def bareiss_det(m: Matrix) -> Fraction:
    """Exact determinant by fraction-free (Bareiss) elimination.

    Each row is first scaled by the lcm of its denominators so elimination runs
    over the integers; the scale factors are divided back out at the end.
    """
    n = _check_square(m)
    rows: list[list[int]] = []
    scale = 1
    for row in m:
        fr = [Fraction(x) for x in row]
        den = math.lcm(*(x.denominator for x in fr))
        rows.append([x.numerator * (den // x.denominator) for x in fr])
        scale *= den

    sign = 1
    prev = 1
    for k in range(n - 1):
        if rows[k][k] == 0:
            for i in range(k + 1, n):
                if rows[i][k] != 0:
                    rows[k], rows[i] = rows[i], rows[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        pivot = rows[k][k]
        rk = rows[k]
        for i in range(k + 1, n):
            ri = rows[i]
            lead = ri[k]
            for j in range(k + 1, n):
                # exact by Sylvester's identity
                ri[j] = (pivot * ri[j] - lead * rk[j]) // prev
            ri[k] = 0
        prev = pivot
    return Fraction(sign * rows[n - 1][n - 1], scale)


def gauss_inverse(m: Matrix) -> Matrix:
    """Exact inverse by Gauss-Jordan elimination over the rationals."""
    n = _check_square(m)
    aug = [[Fraction(x) for x in row] + e for row, e in zip(m, identity(n))]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise SingularMatrixError(f"singular matrix: no pivot in column {col}")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv_p = 1 / aug[col][col]
        prow = [x * inv_p for x in aug[col]]
        aug[col] = prow
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], prow)]
    return [row[n:] for row in aug]


def _omega_powers(n: int) -> np.ndarray:
    # reduce jk mod n before exponentiating to keep the angle small
    jk = np.outer(np.arange(n), np.arange(n)) % n
    return np.exp(2j * np.pi * jk / n)


def _float_row(c: Circulant) -> np.ndarray:
    return np.array([complex(x) for x in c.first_row])


def dft_eigenvalues(c: Circulant) -> np.ndarray:
    """``lambda_j = sum_k c_k * omega**(j*k)`` by direct O(n^2) evaluation."""
    return _omega_powers(c.n) @ _float_row(c)


def dft_det(c: Circulant) -> complex:
    return complex(np.prod(dft_eigenvalues(c)))


def dft_logdet(c: Circulant) -> tuple[complex, float]:
    """``(phase, log|det|)`` so huge determinants can be compared without overflow."""
    lam = dft_eigenvalues(c)
    mags = np.abs(lam)
    if np.any(mags == 0):
        return 0j, -math.inf
    phase = complex(np.prod(lam / mags))
    return phase, float(np.sum(np.log(mags)))


def dft_inverse(c: Circulant, rtol: float = DEFAULT_SINGULAR_RTOL) -> Circulant:
    """First row of ``C^-1`` as ``a_k = (1/n) sum_j omega**(-j*k) / lambda_j``."""
    lam = dft_eigenvalues(c)
    _check_spectrum(lam, rtol)
    a = np.conj(_omega_powers(c.n)) @ (1 / lam) / c.n
    return Circulant([float(x.real) for x in a])


def dft_coefficients_printed(c: Circulant) -> list[float]:
    """``a_k = (1/n) sum_j lambda_j omega**(-j*k)`` exactly as written, without
    the eigenvalue reciprocal.  It reconstructs ``c`` itself."""
    lam = dft_eigenvalues(c)
    a = np.conj(_omega_powers(c.n)) @ lam / c.n
    return [float(x.real) for x in a]


def fft_eigenvalues(c: Circulant) -> np.ndarray:
    # numpy's ifft uses exp(+2 pi i jk / n) scaled by 1/n
    return np.fft.ifft(_float_row(c)) * c.n


def fft_logdet(c: Circulant) -> tuple[complex, float]:
    lam = fft_eigenvalues(c)
    mags = np.abs(lam)
    if np.any(mags == 0):
        return 0j, -math.inf
    return complex(np.prod(lam / mags)), float(np.sum(np.log(mags)))


def fft_inverse(c: Circulant, rtol: float = DEFAULT_SINGULAR_RTOL) -> Circulant:
    lam = fft_eigenvalues(c)
    _check_spectrum(lam, rtol)
    a = np.fft.fft(1 / lam) / c.n
    return Circulant([float(x.real) for x in a])


def _check_spectrum(lam: np.ndarray, rtol: float) -> None:
    mags = np.abs(lam)
    top = mags.max()
    if top == 0 or mags.min() <= rtol * top:
        j = int(np.argmin(mags))
        raise NumericallySingularError(
            f"numerically singular: |lambda_{j}| = {mags[j]:.3g} "
            f"<= {rtol:g} * max|lambda| ({top:.3g})"
        )


def exact_log_abs(x: Fraction) -> float:
    """``log|x|`` for arbitrarily large exact rationals."""
    if x == 0:
        return -math.inf
    return math.log(abs(x.numerator)) - math.log(x.denominator)

