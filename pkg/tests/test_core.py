"""Tests for SPD validation, matrix functions, product roots, compounds."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from spdmeans import (
    DimensionMismatchError,
    DomainError,
    NotHermitianError,
    NotPositiveDefiniteError,
    ParameterError,
    compound,
    expm,
    invsqrtm,
    logm,
    powm,
    product_sqrt,
    sqrtm,
    validate_spd,
)
from spdmeans.core import frobenius, hermitize

from conftest import spd_pair

SQRT3 = np.sqrt(3.0)


class TestValidateSpd:
    def test_identity_accepted(self):
        a = validate_spd(np.eye(3))
        assert a.n == 3
        assert_allclose(a.spectrum, [1.0, 1.0, 1.0])

    def test_signed_spectrum_rejected(self):
        with pytest.raises(NotPositiveDefiniteError):
            validate_spd(np.diag([1.0, -1.0]))

    def test_singular_rejected(self):
        with pytest.raises(NotPositiveDefiniteError):
            validate_spd(np.diag([1.0, 0.0]))

    def test_two_by_two_spectrum(self):
        a = validate_spd([[2.0, 1.0], [1.0, 2.0]])
        assert_allclose(a.spectrum, [3.0, 1.0], rtol=1e-14)

    def test_asymmetry_beyond_tolerance_rejected(self):
        raw = np.array([[2.0, 1.0], [1.0 + 1e-6, 2.0]])
        with pytest.raises(NotHermitianError):
            validate_spd(raw)

    def test_asymmetry_within_tolerance_symmetrized(self):
        raw = np.array([[2.0, 1.0], [1.0 + 1e-12, 2.0]])
        a = validate_spd(raw)
        assert_allclose(a.mat, a.mat.T)

    def test_non_square_rejected(self):
        with pytest.raises(DimensionMismatchError):
            validate_spd(np.ones((2, 3)))

    def test_complex_hermitian_accepted(self):
        raw = np.array([[2.0, 1j], [-1j, 2.0]])
        a = validate_spd(raw)
        assert_allclose(a.spectrum, [3.0, 1.0], rtol=1e-14)

    def test_entries_are_read_only(self):
        a = validate_spd(np.eye(2))
        with pytest.raises(ValueError):
            a.mat[0, 0] = 5.0

    def test_numpy_interop(self):
        a = validate_spd(np.eye(2))
        assert_allclose(np.asarray(a), np.eye(2))


class TestHermitianFunctions:
    def test_sqrt_diagonal(self):
        assert_allclose(sqrtm(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]), atol=1e-14)

    def test_log_identity_is_zero(self):
        assert_allclose(logm(np.eye(4)), np.zeros((4, 4)), atol=1e-14)

    def test_sqrt_closed_form_2x2(self):
        a = np.array([[2.0, 1.0], [1.0, 2.0]])
        expected = 0.5 * np.array([[SQRT3 + 1, SQRT3 - 1], [SQRT3 - 1, SQRT3 + 1]])
        assert_allclose(sqrtm(a), expected, rtol=1e-14)

    @pytest.mark.parametrize("p", [0.25, 0.5, 2.0])
    @pytest.mark.parametrize("seed", [0, 1])
    def test_power_round_trip(self, p, seed):
        a, _ = spd_pair(seed, n=4)
        back = powm(powm(a, p), 1.0 / p)
        assert frobenius(back - a) <= 1e-10 * frobenius(a)

    @pytest.mark.parametrize("field", ["real", "complex"])
    def test_exp_log_round_trip(self, field):
        a, _ = spd_pair(3, n=4, field=field)
        assert frobenius(expm(logm(a)) - a) <= 1e-10 * frobenius(a)

    @pytest.mark.parametrize("fn", [sqrtm, invsqrtm, logm])
    def test_domain_error_on_indefinite(self, fn):
        with pytest.raises(DomainError):
            fn(np.diag([1.0, -2.0]))

    def test_negative_power_needs_pd(self):
        with pytest.raises(DomainError):
            powm(np.diag([1.0, 0.0]), -1)

    def test_integer_power_allows_indefinite(self):
        a = np.diag([1.0, -2.0])
        assert_allclose(powm(a, 2), np.diag([1.0, 4.0]), atol=1e-14)


class TestProductSqrt:
    def test_commuting_diagonal(self):
        out = product_sqrt(np.diag([1.0, 4.0]), np.diag([4.0, 1.0]))
        assert_allclose(out, np.diag([2.0, 2.0]), atol=1e-12)

    def test_identity(self):
        assert_allclose(product_sqrt(np.eye(3), np.eye(3)), np.eye(3), atol=1e-14)

    @pytest.mark.parametrize("field", ["real", "complex"])
    @pytest.mark.parametrize("seed", [5, 6, 7])
    def test_squares_back_to_product(self, field, seed):
        a, b = spd_pair(seed, n=3, field=field)
        ps = product_sqrt(a, b)
        assert frobenius(ps @ ps - a @ b) <= 1e-10 * frobenius(a @ b)

    def test_positive_spectrum(self):
        a, b = spd_pair(8, n=4, cond=(1.0, 1000.0))
        ev = np.linalg.eigvals(product_sqrt(a, b))
        assert np.all(ev.real > 0)
        assert np.max(np.abs(ev.imag)) <= 1e-9 * np.max(np.abs(ev))

    def test_self_product(self):
        a, _ = spd_pair(9, n=4)
        assert frobenius(product_sqrt(a, a) - a) <= 1e-10 * frobenius(a)

    @pytest.mark.parametrize("seed", [10, 11])
    def test_trace_identity(self, seed):
        a, b = spd_pair(seed, n=4)
        rt = sqrtm(a)
        lhs = np.trace(product_sqrt(a, b)).real
        rhs = np.trace(sqrtm(hermitize(rt @ b @ rt))).real
        assert abs(lhs - rhs) <= 1e-10 * abs(rhs)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            product_sqrt(np.eye(2), np.eye(3))


class TestCompound:
    def test_order_one_is_identity_map(self):
        a, _ = spd_pair(12, n=4)
        assert_allclose(compound(a, 1), a)

    def test_top_order_is_determinant(self):
        a, _ = spd_pair(13, n=4)
        out = compound(a, 4)
        assert out.shape == (1, 1)
        assert_allclose(out[0, 0], np.linalg.det(a), rtol=1e-12)

    def test_diagonal_minors(self):
        out = compound(np.diag([2.0, 3.0, 5.0]), 2)
        assert_allclose(out, np.diag([6.0, 10.0, 15.0]), atol=1e-13)

    @pytest.mark.parametrize("n,k", [(3, 2), (4, 2), (4, 3), (5, 2), (5, 4)])
    def test_multiplicative(self, n, k):
        a, b = spd_pair(n * 10 + k, n=n, cond=(1.0, 10.0))
        lhs = compound(a @ b, k)
        rhs = compound(a, k) @ compound(b, k)
        assert frobenius(lhs - rhs) <= 1e-9 * frobenius(rhs)

    @pytest.mark.parametrize("n,k", [(3, 2), (5, 3)])
    def test_top_eigenvalue_is_spectrum_product(self, n, k):
        a, _ = spd_pair(n + k, n=n, cond=(1.0, 10.0))
        lam = np.linalg.eigvalsh(a)[::-1]
        top = np.linalg.eigvalsh(hermitize(compound(a, k)))[-1]
        assert_allclose(top, np.prod(lam[:k]), rtol=1e-9)

    @pytest.mark.parametrize("k", [0, 5])
    def test_order_out_of_range(self, k):
        with pytest.raises(ParameterError):
            compound(np.eye(4), k)
