"""Tests for closed-form and fixed-point means."""

import warnings

import numpy as np
import pytest
from numpy.testing import assert_allclose

from spdmeans import (
    MeanProblem,
    ParameterError,
    SolverConfig,
    ZeroExponentError,
    arithmetic_mean,
    cartan_mean,
    cartan_distance,
    geometric_geodesic,
    haar_unitary,
    harmonic_mean,
    lim_palfia_mean,
    log_euclidean_mean,
    power_mean,
    pt_limit_probe,
    sqrtm,
    wasserstein_barycenter,
    wasserstein_geodesic,
)
from spdmeans.core import frobenius, hermitize
from spdmeans.means import TraceMonotonicityWarning

from conftest import commuting_problem, random_problem, spd_pair

D14 = np.diag([1.0, 4.0])
D41 = np.diag([4.0, 1.0])
HALF = np.array([0.5, 0.5])

ALL_MEANS = [
    ("arithmetic", lambda p: arithmetic_mean(p)),
    ("harmonic", lambda p: harmonic_mean(p)),
    ("log_euclidean", lambda p: log_euclidean_mean(p)),
    ("power_half", lambda p: power_mean(p, 0.5)),
    ("cartan", lambda p: cartan_mean(p).value),
    ("wasserstein", lambda p: wasserstein_barycenter(p).value),
    ("lim_palfia_half", lambda p: lim_palfia_mean(p, 0.5).value),
]


def problem_of(*mats, weights=None):
    mats = [np.asarray(m, dtype=float) for m in mats]
    w = np.full(len(mats), 1.0 / len(mats)) if weights is None else np.asarray(weights)
    return MeanProblem(w, mats)


class TestClosedForms:
    def test_arithmetic_hand_value(self):
        assert_allclose(arithmetic_mean(problem_of(D14, D41)), np.diag([2.5, 2.5]))

    def test_harmonic_hand_value(self):
        assert_allclose(harmonic_mean(problem_of(D14, D41)), np.diag([1.6, 1.6]),
                        rtol=1e-14)

    def test_harmonic_scalar_reduction(self):
        p = problem_of([[2.0]], [[3.0]])
        assert_allclose(harmonic_mean(p)[0, 0], 1.0 / (0.5 / 2 + 0.5 / 3), rtol=1e-14)

    def test_log_euclidean_hand_value(self):
        assert_allclose(log_euclidean_mean(problem_of(D14, D41)), np.diag([2.0, 2.0]),
                        rtol=1e-14)

    def test_log_euclidean_commuting_is_weighted_product(self):
        p = commuting_problem(1, n=4, m=3)
        w, mats = p.weights, p.matrices
        # All matrices share one eigenbasis; read the paired eigenvalues off
        # that basis, then the mean is the entrywise weighted product.
        _, u = np.linalg.eigh(mats[0])
        lam = [np.diag(u.conj().T @ a @ u).real for a in mats]
        diag = np.prod([v**wj for wj, v in zip(w, lam)], axis=0)
        expected = hermitize(u @ np.diag(diag) @ u.conj().T)
        assert frobenius(log_euclidean_mean(p) - expected) <= 1e-10 * frobenius(expected)

    def test_power_one_is_arithmetic(self):
        p = random_problem(2)
        assert_allclose(power_mean(p, 1.0), arithmetic_mean(p), rtol=1e-12)

    def test_power_minus_one_is_harmonic(self):
        p = random_problem(3)
        assert_allclose(power_mean(p, -1.0), harmonic_mean(p), rtol=1e-12)

    def test_power_half_commuting_hand_value(self):
        assert_allclose(power_mean(problem_of(D14, D41), 0.5),
                        np.diag([2.25, 2.25]), rtol=1e-14)

    def test_zero_exponent_rejected(self):
        with pytest.raises(ZeroExponentError):
            power_mean(problem_of(D14, D41), 0.0)

    def test_power_half_expansion_two_matrices(self):
        # (w1 A^(1/2) + w2 B^(1/2))^2 expanded into its four terms.
        a, b = spd_pair(4)
        t = 0.3
        p = MeanProblem(np.array([1 - t, t]), [a, b])
        ra, rb = sqrtm(a), sqrtm(b)
        expanded = ((1 - t) ** 2 * a + t**2 * b
                    + (1 - t) * t * (ra @ rb + rb @ ra))
        assert frobenius(power_mean(p, 0.5) - expanded) <= 1e-10 * frobenius(expanded)


class TestGeodesics:
    @pytest.mark.parametrize("geo", [geometric_geodesic, wasserstein_geodesic])
    def test_endpoints(self, geo):
        a, b = spd_pair(5)
        assert frobenius(geo(a, b, 0.0) - a) <= 1e-12 * frobenius(a)
        assert frobenius(geo(a, b, 1.0) - b) <= 1e-12 * frobenius(b)

    @pytest.mark.parametrize("geo", [geometric_geodesic, wasserstein_geodesic])
    @pytest.mark.parametrize("t", [-0.1, 1.1])
    def test_parameter_range(self, geo, t):
        with pytest.raises(ParameterError):
            geo(np.eye(2), np.eye(2), t)

    def test_commuting_midpoints(self):
        assert_allclose(geometric_geodesic(D14, D41, 0.5), np.diag([2.0, 2.0]),
                        atol=1e-13)
        assert_allclose(wasserstein_geodesic(D14, D41, 0.5), np.diag([2.25, 2.25]),
                        atol=1e-13)

    @pytest.mark.parametrize("seed,t", [(6, 0.25), (7, 0.5), (8, 0.75)])
    def test_geometric_determinant_identity(self, seed, t):
        a, b = spd_pair(seed)
        det = np.linalg.det(geometric_geodesic(a, b, t))
        expected = np.linalg.det(a) ** (1 - t) * np.linalg.det(b) ** t
        assert_allclose(det, expected, rtol=1e-10)

    @pytest.mark.parametrize("seed,t", [(9, 0.3), (10, 0.5), (11, 0.8)])
    def test_wasserstein_geodesic_matches_barycenter(self, seed, t):
        a, b = spd_pair(seed)
        closed = wasserstein_geodesic(a, b, t)
        p = MeanProblem(np.array([1 - t, t]), [a, b])
        solved = wasserstein_barycenter(p).value
        assert frobenius(closed - solved) <= 1e-8 * frobenius(closed)


class TestSolvers:
    @pytest.mark.parametrize("seed,t", [(12, 0.2), (13, 0.5), (14, 0.9)])
    def test_cartan_two_matrices_matches_geodesic(self, seed, t):
        a, b = spd_pair(seed)
        p = MeanProblem(np.array([1 - t, t]), [a, b])
        solved = cartan_mean(p).value
        closed = geometric_geodesic(a, b, t)
        assert frobenius(solved - closed) <= 1e-9 * frobenius(closed)

    def test_cartan_commuting_closed_form(self):
        p = commuting_problem(15, n=3, m=4)
        assert frobenius(cartan_mean(p).value - log_euclidean_mean(p)) \
            <= 1e-10 * frobenius(log_euclidean_mean(p))

    def test_wasserstein_commuting_closed_form(self):
        p = commuting_problem(16, n=3, m=4)
        expected = power_mean(p, 0.5)
        assert frobenius(wasserstein_barycenter(p).value - expected) \
            <= 1e-10 * frobenius(expected)

    def test_lim_palfia_commuting_closed_form(self):
        p = commuting_problem(17, n=3, m=3)
        for t in (0.25, 0.5):
            expected = power_mean(p, t)
            got = lim_palfia_mean(p, t).value
            assert frobenius(got - expected) <= 1e-10 * frobenius(expected)

    def test_lim_palfia_midpoint_closed_form(self):
        a, b = spd_pair(18)
        p = MeanProblem(HALF, [a, b])
        closed = 0.25 * (a + b + 2.0 * geometric_geodesic(a, b, 0.5))
        got = lim_palfia_mean(p, 0.5).value
        assert frobenius(got - closed) <= 1e-9 * frobenius(closed)

    @pytest.mark.parametrize("solver", [
        lambda p: cartan_mean(p),
        lambda p: wasserstein_barycenter(p),
        lambda p: lim_palfia_mean(p, 0.5),
    ])
    def test_idempotence(self, solver):
        a, _ = spd_pair(19)
        p = MeanProblem(np.array([0.3, 0.7]), [a, a])
        res = solver(p)
        assert res.converged
        assert res.iterations <= 1
        assert frobenius(res.value - a) <= 1e-10 * frobenius(a)

    def test_wasserstein_first_iterate_is_power_half(self):
        p = random_problem(20, m=4)
        res = wasserstein_barycenter(p)  # identity init by default
        assert_allclose(res.trace_history[1], np.trace(power_mean(p, 0.5)).real,
                        rtol=1e-12)

    def test_wasserstein_trace_history_monotone_after_first(self):
        p = random_problem(21, m=5, cond=(1.0, 1000.0))
        hist = wasserstein_barycenter(p).trace_history
        steps = np.diff(hist[1:])
        assert np.all(steps >= -1e-12 * np.maximum(1.0, np.abs(hist[2:])))

    def test_solver_result_invariants(self):
        p = random_problem(22, m=3)
        cfg = SolverConfig(residual_tol=1e-12, max_iter=200)
        for res in (cartan_mean(p, cfg), wasserstein_barycenter(p, cfg),
                    lim_palfia_mean(p, 0.5, cfg)):
            assert res.converged
            assert res.residual <= cfg.residual_tol
            assert len(res.trace_history) == res.iterations + 1

    def test_non_convergence_returns_flagged_result(self):
        p = random_problem(23, m=4, cond=(100.0, 1000.0))
        res = wasserstein_barycenter(p, SolverConfig(residual_tol=1e-12, max_iter=2))
        assert not res.converged
        assert res.iterations == 2
        assert res.residual > 1e-12
        assert len(res.trace_history) == 3

    def test_explicit_and_named_inits(self):
        p = random_problem(24, m=3)
        reference = wasserstein_barycenter(p).value
        for init in ("arithmetic", "log_euclidean", "identity", arithmetic_mean(p)):
            res = wasserstein_barycenter(p, SolverConfig(init=init))
            assert res.converged
            assert frobenius(res.value - reference) <= 1e-9 * frobenius(reference)
        with pytest.raises(ParameterError):
            wasserstein_barycenter(p, SolverConfig(init="nonsense"))

    @pytest.mark.parametrize("field", ["real", "complex"])
    def test_complex_support(self, field):
        p = random_problem(25, n=3, m=3, field=field)
        for res in (cartan_mean(p), wasserstein_barycenter(p),
                    lim_palfia_mean(p, 0.5)):
            assert res.converged

    def test_lim_palfia_t_range(self):
        p = random_problem(26)
        for t in (0.0, 1.0, -0.5):
            with pytest.raises(ParameterError):
                lim_palfia_mean(p, t)


class TestSharedProperties:
    @pytest.mark.parametrize("alpha", [1.0 / 3.0, 7.0])
    @pytest.mark.parametrize("name,mean", ALL_MEANS)
    def test_homogeneity(self, alpha, name, mean):
        p = random_problem(27, m=3)
        scaled = MeanProblem(p.weights, alpha * p.matrices)
        got = mean(scaled)
        expected = alpha * mean(p)
        assert frobenius(got - expected) <= 1e-9 * frobenius(expected)

    @pytest.mark.parametrize("name,mean", ALL_MEANS)
    def test_permutation_equivariance(self, name, mean):
        p = random_problem(28, m=4)
        perm = [2, 0, 3, 1]
        shuffled = MeanProblem(p.weights[perm], p.matrices[perm])
        assert frobenius(mean(shuffled) - mean(p)) <= 1e-10 * frobenius(mean(p))

    @pytest.mark.parametrize("name,mean", ALL_MEANS)
    def test_unitary_equivariance(self, name, mean, rng):
        p = random_problem(29, m=3)
        u = haar_unitary(3, rng)
        rotated = MeanProblem(
            p.weights, np.stack([hermitize(u @ a @ u.conj().T) for a in p.matrices])
        )
        expected = hermitize(u @ mean(p) @ u.conj().T)
        assert frobenius(mean(rotated) - expected) <= 1e-9 * frobenius(expected)

    def test_cartan_congruence_equivariance(self, rng):
        p = random_problem(30, m=3)
        x = rng.standard_normal((3, 3)) + 2 * np.eye(3)
        moved = MeanProblem(
            p.weights, np.stack([hermitize(x.T @ a @ x) for a in p.matrices])
        )
        expected = hermitize(x.T @ cartan_mean(p).value @ x)
        got = cartan_mean(moved).value
        assert frobenius(got - expected) <= 1e-9 * frobenius(expected)

    def test_determinant_identity(self):
        p = random_problem(31, m=4)
        logdet = sum(
            w * np.linalg.slogdet(a)[1] for w, a in zip(p.weights, p.matrices)
        )
        for mat in (cartan_mean(p).value, log_euclidean_mean(p)):
            assert_allclose(np.linalg.slogdet(mat)[1], logdet, rtol=1e-9, atol=1e-9)

    def test_agh_sandwich(self):
        p = random_problem(32, m=4, cond=(1.0, 500.0))
        g = cartan_mean(p).value
        upper = arithmetic_mean(p) - g
        lower = g - harmonic_mean(p)
        scale = frobenius(arithmetic_mean(p))
        assert np.linalg.eigvalsh(hermitize(upper))[0] >= -1e-9 * scale
        assert np.linalg.eigvalsh(hermitize(lower))[0] >= -1e-9 * scale

    def test_wasserstein_geometric_characterization(self):
        p = random_problem(33, m=4)
        omega = wasserstein_barycenter(p).value
        omega_inv = np.linalg.inv(omega)
        acc = sum(
            w * geometric_geodesic(a, hermitize(omega_inv), 0.5)
            for w, a in zip(p.weights, p.matrices)
        )
        assert frobenius(acc - np.eye(p.n)) <= 1e-8

    def test_zero_weight_matrix_is_inert(self):
        a, b = spd_pair(34)
        c = np.eye(3) * 1e6
        with_zero = MeanProblem(np.array([0.5, 0.5, 0.0]), [a, b, c])
        without = MeanProblem(HALF, [a, b])
        got = wasserstein_barycenter(with_zero).value
        expected = wasserstein_barycenter(without).value
        assert frobenius(got - expected) <= 1e-8 * frobenius(expected)


class TestLimitProbe:
    def test_commuting_reduces_to_power_mean_distance(self):
        # Commuting families do not collapse the probe to zero: there the
        # power-type mean equals the power mean and the Cartan mean equals
        # the log-Euclidean mean, so the probe measures their gap exactly.
        p = commuting_problem(35, n=3, m=3)
        probe = pt_limit_probe(p, [0.5, 0.25])
        from spdmeans import log_euclidean_distance

        for t, d in probe:
            expected = log_euclidean_distance(power_mean(p, t), log_euclidean_mean(p))
            assert abs(d - expected) <= 1e-8 * max(1.0, expected)

    def test_random_instance_decreasing(self):
        p = random_problem(36, m=3)
        probe = pt_limit_probe(p, [0.5, 0.25, 0.125, 0.0625])
        dists = [d for _, d in probe]
        assert all(a > b for a, b in zip(dists, dists[1:]))

    def test_idempotent_all_zero(self):
        a, _ = spd_pair(37)
        p = MeanProblem(HALF, [a, a])
        probe = pt_limit_probe(p, [0.5, 0.25])
        assert all(d <= 1e-9 for _, d in probe)

    def test_sequence_validation(self):
        p = random_problem(38)
        with pytest.raises(ParameterError):
            pt_limit_probe(p, [0.25, 0.5])
        with pytest.raises(ParameterError):
            pt_limit_probe(p, [0.5, 0.0])


class TestProblemValidation:
    def test_weights_must_sum_to_one(self):
        a, b = spd_pair(39)
        with pytest.raises(ParameterError):
            MeanProblem(np.array([0.6, 0.6]), [a, b])

    def test_weights_must_be_nonnegative(self):
        a, b = spd_pair(40)
        with pytest.raises(ParameterError):
            MeanProblem(np.array([1.5, -0.5]), [a, b])

    def test_weight_count_must_match(self):
        a, b = spd_pair(41)
        with pytest.raises(Exception):
            MeanProblem(np.array([1.0]), [a, b])

    def test_uniform_constructor(self):
        a, b = spd_pair(42)
        p = MeanProblem.uniform([a, b])
        assert_allclose(p.weights, HALF)

    def test_no_monotonicity_warning_on_clean_runs(self):
        p = random_problem(43, m=4)
        with warnings.catch_warnings():
            warnings.simplefilter("error", TraceMonotonicityWarning)
            wasserstein_barycenter(p)
