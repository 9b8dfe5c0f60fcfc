from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import adjugate_inverse, leibniz_det
from horacirc.circulant import Circulant, from_params, identity, is_circulant, materialize, matmul, transpose
from horacirc.errors import NumericallySingularError, SingularMatrixError
from horacirc.oracle import (
    bareiss_det,
    dft_coefficients_printed,
    dft_det,
    dft_eigenvalues,
    dft_inverse,
    exact_log_abs,
    fft_eigenvalues,
    fft_inverse,
    gauss_inverse,
)

C112 = Circulant([1, 1, 2])
C1123 = Circulant([1, 1, 2, 3])
INV_C112 = Circulant([F(-1, 4), F(3, 4), F(-1, 4)])
INV_C1123 = Circulant([F(-11, 35), F(17, 35), F(-4, 35), F(3, 35)])


def test_anchor_values_by_independent_routes():
    # Leibniz sums fix the expected determinants independently of Bareiss
    assert leibniz_det(materialize(C112)) == 4
    assert leibniz_det(materialize(C1123)) == -35
    # f(x) = 1 + x + 2x^2 + 3x^3 at the 4th roots of unity, in exact Gaussian integers
    f = lambda x: 1 + x + 2 * x**2 + 3 * x**3
    prod = f(1) * f(-1) * f(1j) * f(-1j)
    assert prod == -35
    assert adjugate_inverse(materialize(C112)) == materialize(INV_C112)
    assert adjugate_inverse(materialize(C1123)) == materialize(INV_C1123)


def test_bareiss_examples():
    assert bareiss_det(identity(4)) == 1
    assert bareiss_det(materialize(C112)) == 4
    assert bareiss_det(materialize(C1123)) == -35
    assert bareiss_det(materialize(Circulant([1, 1, 1]))) == 0


def test_bareiss_with_fractions_and_pivoting():
    m = [[0, F(1, 2), 3], [F(2, 3), 0, 1], [5, F(-1, 7), 0]]
    m = [[F(x) for x in r] for r in m]
    assert bareiss_det(m) == leibniz_det(m)


square = st.integers(1, 5).flatmap(
    lambda n: st.lists(
        st.lists(st.fractions(min_value=-9, max_value=9, max_denominator=5), min_size=n, max_size=n),
        min_size=n, max_size=n,
    )
)


@settings(max_examples=80, deadline=None)
@given(square)
def test_bareiss_matches_leibniz_and_transpose(m):
    d = bareiss_det(m)
    assert d == leibniz_det(m)
    assert d == bareiss_det(transpose(m))


def test_gauss_inverse_examples():
    assert gauss_inverse(materialize(C112)) == materialize(INV_C112)
    assert gauss_inverse(materialize(C1123)) == materialize(INV_C1123)
    assert gauss_inverse(identity(3)) == identity(3)
    with pytest.raises(SingularMatrixError):
        gauss_inverse(materialize(Circulant([1, 1, 1])))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 7).flatmap(
    lambda n: st.lists(st.integers(-6, 6), min_size=n, max_size=n)))
def test_gauss_inverse_of_circulant_is_circulant(row):
    m = materialize(Circulant(row))
    if bareiss_det(m) == 0:
        return
    inv = gauss_inverse(m)
    assert matmul(inv, m) == identity(len(row))
    assert is_circulant(inv)


def test_dft_eigenvalues():
    lam = dft_eigenvalues(C1123)
    np.testing.assert_allclose(lam, [7, -1 - 2j, -1, -1 + 2j], atol=1e-12)
    np.testing.assert_allclose(dft_eigenvalues(Circulant([5])), [5])
    np.testing.assert_allclose(dft_eigenvalues(Circulant([1, 1, 1])), [3, 0, 0], atol=1e-12)
    np.testing.assert_allclose(fft_eigenvalues(C1123), lam, atol=1e-12)


def test_dft_det():
    z = dft_det(C1123)
    assert abs(z.real + 35) < 1e-9 * 35 and abs(z.imag) < 1e-9 * 35
    assert abs(dft_det(Circulant([1, 1, 1]))) < 1e-9
    assert abs(dft_det(Circulant([1, 3, 4])) - 56) < 1e-9 * 56


def test_dft_inverse():
    np.testing.assert_allclose(dft_inverse(C112).first_row, [-0.25, 0.75, -0.25], atol=1e-12)
    np.testing.assert_allclose(dft_inverse(Circulant([1, 0, 0, 0])).first_row, [1, 0, 0, 0], atol=1e-12)
    np.testing.assert_allclose(fft_inverse(C1123).first_row, [float(x) for x in INV_C1123.first_row], atol=1e-12)
    with pytest.raises(NumericallySingularError):
        dft_inverse(Circulant([1, 1, 1]))


def test_printed_dft_coefficients_rebuild_the_matrix():
    np.testing.assert_allclose(dft_coefficients_printed(C1123), [1, 1, 2, 3], atol=1e-12)


def test_exact_log_abs_handles_huge_values():
    big = F(10**400)
    assert abs(exact_log_abs(big) - 400 * np.log(10)) < 1e-9
    assert exact_log_abs(F(0)) == float("-inf")


def test_dft_det_horadam(lucas):
    c = from_params(lucas, 7)
    exact = bareiss_det(materialize(c))
    assert abs(dft_det(c) - float(exact)) <= 1e-9 * abs(float(exact))
