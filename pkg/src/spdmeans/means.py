"""Means of positive definite matrices.

Closed forms (arithmetic, harmonic, log-Euclidean, power, and the
two-matrix geodesics) plus the three fixed-point means:

* ``cartan_mean`` solves ``sum_j w_j log(X^(-1/2) A_j X^(-1/2)) = 0``
* ``wasserstein_barycenter`` solves ``X = sum_j w_j (X^(1/2) A_j X^(1/2))^(1/2)``
* ``lim_palfia_mean`` solves ``X = sum_j w_j (X #_t A_j)``

Solvers report a relative residual and never raise on non-convergence:
they return their best iterate flagged ``converged=False`` so that a
verification harness can still inspect partial data.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np

from .core import (
    _as_matrix,
    expm,
    frobenius,
    hermitize,
    invsqrtm,
    logm,
    powm,
    product_sqrt,
    sqrtm,
)
from .errors import DimensionMismatchError, ParameterError, ZeroExponentError
from .metrics import cartan_distance

__all__ = [
    "MeanProblem",
    "SolverConfig",
    "SolverResult",
    "TraceMonotonicityWarning",
    "arithmetic_mean",
    "harmonic_mean",
    "log_euclidean_mean",
    "power_mean",
    "geometric_geodesic",
    "wasserstein_geodesic",
    "cartan_mean",
    "wasserstein_barycenter",
    "lim_palfia_mean",
    "pt_limit_probe",
]

#: Below this absolute scale, relative residual thresholds fall back to an
#: absolute floor so that problems with near-zero natural scale still converge.
ABS_RESIDUAL_FLOOR = 1e-14

WEIGHT_TOL = 1e-12


class TraceMonotonicityWarning(RuntimeWarning):
    """The Wasserstein iteration produced a decreasing trace after the first
    step, which the underlying theory rules out; numerics have degraded."""


@dataclass(frozen=True, eq=False)
class MeanProblem:
    """A weight vector together with the matrices it weighs.

    Attributes
    ----------
    weights : ndarray, shape (m,)
        Nonnegative, summing to 1 (within 1e-12). Zero weights are allowed;
        the corresponding matrix is inert.
    matrices : ndarray, shape (m, n, n)
        Positive definite matrices, all of one dimension.
    """

    weights: np.ndarray
    matrices: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        mats = np.stack([_as_matrix(a) for a in self.matrices])
        if w.ndim != 1 or len(w) != mats.shape[0]:
            raise DimensionMismatchError(
                f"{len(w)} weights for {mats.shape[0]} matrices"
            )
        if mats.ndim != 3 or mats.shape[1] != mats.shape[2]:
            raise DimensionMismatchError(f"expected (m, n, n) matrices, got {mats.shape}")
        if np.any(w < 0.0) or abs(w.sum() - 1.0) > WEIGHT_TOL:
            raise ParameterError(
                f"weights must be nonnegative and sum to 1, got sum {w.sum()!r}"
            )
        w.flags.writeable = False
        mats.flags.writeable = False
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "matrices", mats)

    @property
    def m(self):
        return self.matrices.shape[0]

    @property
    def n(self):
        return self.matrices.shape[1]

    @classmethod
    def uniform(cls, matrices):
        """Equal-weight problem over the given matrices."""
        m = len(matrices)
        return cls(np.full(m, 1.0 / m), matrices)


@dataclass(frozen=True)
class SolverConfig:
    """Iteration parameters shared by the fixed-point solvers.

    ``init`` may be ``"arithmetic"``, ``"log_euclidean"``, ``"identity"``,
    an explicit matrix, or None for the solver-specific default.
    """

    residual_tol: float = 1e-12
    max_iter: int = 500
    init: object = None

    def __post_init__(self):
        if self.residual_tol <= 0.0:
            raise ParameterError("residual_tol must be > 0")
        if self.max_iter < 1:
            raise ParameterError("max_iter must be >= 1")


@dataclass(frozen=True, eq=False)
class SolverResult:
    """Outcome of a fixed-point solve.

    ``residual`` is relative to the problem's natural scale, so
    ``converged`` implies ``residual <= residual_tol``. ``trace_history``
    holds the trace of every iterate, the initial one included.
    """

    value: np.ndarray
    residual: float
    iterations: int
    converged: bool
    trace_history: list


def _weighted_sum(weights, stack):
    return np.einsum("j,jkl->kl", weights, stack)


def arithmetic_mean(problem):
    """Weighted arithmetic mean ``sum_j w_j A_j``."""
    return _weighted_sum(problem.weights, problem.matrices)


def harmonic_mean(problem):
    """Weighted harmonic mean ``(sum_j w_j A_j^(-1))^(-1)``."""
    inv = _weighted_sum(
        problem.weights, np.stack([powm(a, -1) for a in problem.matrices])
    )
    return powm(inv, -1)


def log_euclidean_mean(problem):
    """Log-Euclidean mean ``exp(sum_j w_j log A_j)``."""
    logs = _weighted_sum(
        problem.weights, np.stack([logm(a) for a in problem.matrices])
    )
    return expm(logs)


def power_mean(problem, exponent):
    """Power mean ``(sum_j w_j A_j^p)^(1/p)`` for nonzero exponent ``p``.

    The exponent-0 limit is the log-Euclidean mean; call that directly.
    """
    if exponent == 0:
        raise ZeroExponentError(
            "exponent 0 is the log-Euclidean limit; use log_euclidean_mean"
        )
    powered = _weighted_sum(
        problem.weights, np.stack([powm(a, exponent) for a in problem.matrices])
    )
    return powm(powered, 1.0 / exponent)


def geometric_geodesic(a, b, t):
    """Point ``A #_t B = A^(1/2) (A^(-1/2) B A^(-1/2))^t A^(1/2)``.

    The geodesic of the Cartan metric; ``t = 1/2`` is the two-matrix
    geometric mean.
    """
    if not 0.0 <= t <= 1.0:
        raise ParameterError(f"geodesic parameter t={t} outside [0, 1]")
    a = _as_matrix(a)
    b = _as_matrix(b)
    if a.shape != b.shape:
        raise DimensionMismatchError(f"shape mismatch: {a.shape} vs {b.shape}")
    rt = sqrtm(a)
    irt = invsqrtm(a)
    return hermitize(rt @ powm(irt @ b @ irt, t) @ rt)


def wasserstein_geodesic(a, b, t):
    """Point on the Bures-Wasserstein geodesic,

        (1-t)^2 A + t^2 B + t(1-t) [(AB)^(1/2) + (BA)^(1/2)].

    ``t = 1/2`` is the two-matrix Wasserstein mean; for general ``t`` this
    is the two-matrix barycenter with weights ``(1-t, t)``. ``(BA)^(1/2)``
    is the conjugate transpose of ``(AB)^(1/2)``, so the bracket is exactly
    Hermitian by construction.
    """
    if not 0.0 <= t <= 1.0:
        raise ParameterError(f"geodesic parameter t={t} outside [0, 1]")
    a = _as_matrix(a)
    b = _as_matrix(b)
    if a.shape != b.shape:
        raise DimensionMismatchError(f"shape mismatch: {a.shape} vs {b.shape}")
    ab_rt = product_sqrt(a, b)
    cross = ab_rt + ab_rt.conj().T
    return hermitize((1 - t) ** 2 * a + t**2 * b + t * (1 - t) * cross)


def _initial_iterate(problem, config, default):
    init = default if (config.init is None) else config.init
    if isinstance(init, str):
        if init == "arithmetic":
            return arithmetic_mean(problem)
        if init == "log_euclidean":
            return log_euclidean_mean(problem)
        if init == "identity":
            eye = np.eye(problem.n)
            if np.iscomplexobj(problem.matrices):
                eye = eye.astype(complex)
            return eye
        raise ParameterError(f"unknown init {init!r}")
    init = _as_matrix(init)
    if init.shape != (problem.n, problem.n):
        raise DimensionMismatchError(
            f"init shape {init.shape} does not match problem dimension {problem.n}"
        )
    return init.copy()


def _finish(x, residual, iterations, converged, traces):
    x = hermitize(x)
    x.flags.writeable = False
    return SolverResult(x, float(residual), iterations, converged, traces)


def cartan_mean(problem, config=SolverConfig()):
    """Cartan (Karcher) mean by damped fixed-point iteration.

    Iterates ``X <- X^(1/2) exp(s * R(X)) X^(1/2)`` with
    ``R(X) = sum_j w_j log(X^(-1/2) A_j X^(-1/2))``, starting from the
    log-Euclidean mean by default. The step ``s`` starts at 1 and is halved
    (floor 1/16) whenever the Cartan distance between successive iterates
    grows; while the moves keep shrinking it is allowed to grow slowly
    (cap 8), because widely spread instances contract at a rate close to 1
    under the unit step and would otherwise need thousands of iterations.

    Converged when ``||R(X)||_F`` drops below ``residual_tol`` times the
    log-scale of the inputs (the largest ``||log A_j||_F``).
    """
    log_scale = max(frobenius(logm(a)) for a in problem.matrices)
    # Relative to the log-scale of the inputs, with an absolute fallback so
    # that an all-identity problem still terminates.
    scale = max(log_scale, ABS_RESIDUAL_FLOOR / config.residual_tol)
    x = _initial_iterate(problem, config, "log_euclidean")
    traces = [float(np.trace(x).real)]
    step = 1.0
    prev_move = None
    residual = np.inf
    for k in range(config.max_iter + 1):
        irt = invsqrtm(x)
        r = _weighted_sum(
            problem.weights, np.stack([logm(irt @ a @ irt) for a in problem.matrices])
        )
        residual = frobenius(r) / scale
        if residual <= config.residual_tol:
            return _finish(x, residual, k, True, traces)
        if k == config.max_iter:
            break
        # The Cartan distance between X_k and X_{k+1} is exactly step * ||R||.
        move = step * residual
        if prev_move is not None:
            if move > prev_move:
                step = max(0.5 * step, 1.0 / 16.0)
                move = step * residual
            else:
                step = min(1.25 * step, 8.0)
                move = step * residual
        prev_move = move
        rt = sqrtm(x)
        x = hermitize(rt @ expm(step * r) @ rt)
        traces.append(float(np.trace(x).real))
    return _finish(x, residual, config.max_iter, False, traces)


def wasserstein_barycenter(problem, config=SolverConfig()):
    """Wasserstein barycenter by the fixed-point map

        K(X) = X^(-1/2) (sum_j w_j (X^(1/2) A_j X^(1/2))^(1/2))^2 X^(-1/2),

    run plain (no acceleration) from the identity by default; the first
    iterate from the identity is then exactly the one-half power mean.
    From the first iterate on, the traces of the iterates must be
    non-decreasing; a decrease is reported as a runtime warning because it
    signals degraded numerics, and the iteration continues.

    Converged when ``||X - sum_j w_j (X^(1/2) A_j X^(1/2))^(1/2)||_F``
    drops below ``residual_tol * ||X||_F``.
    """
    x = _initial_iterate(problem, config, "identity")
    traces = [float(np.trace(x).real)]
    residual = np.inf
    for k in range(config.max_iter + 1):
        rt = sqrtm(x)
        t_sum = _weighted_sum(
            problem.weights, np.stack([sqrtm(rt @ a @ rt) for a in problem.matrices])
        )
        norm_x = frobenius(x)
        residual = frobenius(x - t_sum) / max(norm_x, ABS_RESIDUAL_FLOOR)
        if residual <= config.residual_tol:
            return _finish(x, residual, k, True, traces)
        if k == config.max_iter:
            break
        irt = invsqrtm(x)
        x = hermitize(irt @ t_sum @ t_sum @ irt)
        tr = float(np.trace(x).real)
        if len(traces) >= 2 and tr < traces[-1] - 1e-12 * max(1.0, abs(traces[-1])):
            warnings.warn(
                f"trace decreased from {traces[-1]!r} to {tr!r} at iterate {k + 1}",
                TraceMonotonicityWarning,
                stacklevel=2,
            )
        traces.append(tr)
    return _finish(x, residual, config.max_iter, False, traces)


def lim_palfia_mean(problem, t, config=SolverConfig()):
    """Power-type mean solving ``X = sum_j w_j (X #_t A_j)`` for ``0 < t < 1``.

    Plain fixed-point iteration from the arithmetic mean by default. The
    map contracts at rate roughly ``1 - t``, so small ``t`` converges
    slowly; that is inherent, not a defect.
    """
    if not 0.0 < t < 1.0:
        raise ParameterError(f"power parameter t={t} outside (0, 1)")
    x = _initial_iterate(problem, config, "arithmetic")
    traces = [float(np.trace(x).real)]
    residual = np.inf
    for k in range(config.max_iter + 1):
        f = _weighted_sum(
            problem.weights,
            np.stack([geometric_geodesic(x, a, t) for a in problem.matrices]),
        )
        norm_x = frobenius(x)
        residual = frobenius(x - f) / max(norm_x, ABS_RESIDUAL_FLOOR)
        if residual <= config.residual_tol:
            return _finish(x, residual, k, True, traces)
        if k == config.max_iter:
            break
        x = f
        traces.append(float(np.trace(x).real))
    return _finish(x, residual, config.max_iter, False, traces)


def pt_limit_probe(problem, t_sequence, config=SolverConfig()):
    """Distance of the power-type mean to the Cartan mean along shrinking ``t``.

    Returns ``[(t, cartan_distance(P_t, G)), ...]`` for the given strictly
    decreasing positive sequence. Each solve warm-starts from the previous
    value, which does not change the limits, only the iteration counts.
    """
    ts = list(t_sequence)
    if any(not 0.0 < t < 1.0 for t in ts):
        raise ParameterError("t_sequence entries must lie in (0, 1)")
    if any(b >= a for a, b in zip(ts, ts[1:])):
        raise ParameterError("t_sequence must be strictly decreasing")
    g = cartan_mean(problem, config).value
    out = []
    init = config.init
    for t in ts:
        result = lim_palfia_mean(
            problem,
            t,
            SolverConfig(config.residual_tol, config.max_iter, init),
        )
        out.append((t, cartan_distance(result.value, g)))
        init = result.value
    return out
