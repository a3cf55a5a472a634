"""Catalog of named inequality and identity checks.

Each check evaluates one matrix-mean inequality, limit, or structure
identity on a concrete problem instance and grades it ``holds`` /
``violated`` / ``indeterminate`` against a tolerance band. Checks that
restate proved theorems are *asserted*: a violated verdict on a converged
instance is a defect in this package, never new mathematics. Checks that
probe open conjectures are *exploratory*: violations are findings to
report, not failures.

Two-matrix instances use the closed forms for the Wasserstein and Cartan
means; larger instances go through the fixed-point solvers, and a solve
that does not converge makes the verdict ``indeterminate``.
"""

import hashlib
from dataclasses import dataclass

import numpy as np

from . import majorization as mj
from .core import (
    _as_matrix,
    compound,
    frobenius,
    hermitize,
    invsqrtm,
    logm,
    powm,
    product_sqrt,
    sqrtm,
)
from .errors import IncompatibleInstanceError
from .means import (
    MeanProblem,
    SolverConfig,
    arithmetic_mean,
    geometric_geodesic,
    harmonic_mean,
    lim_palfia_mean,
    log_euclidean_mean,
    power_mean,
    wasserstein_barycenter,
    wasserstein_geodesic,
    cartan_mean,
)
from .metrics import log_euclidean_distance

__all__ = [
    "CheckResult",
    "CHECKS",
    "SEARCH_TARGETS",
    "run_check",
    "instance_digest",
    "adapt_problem",
]

#: Tolerance for the identity-type checks (fixed-point characterizations,
#: compound-matrix equivariance), which compare computed matrices for
#: equality rather than testing an inequality.
EQUALITY_TOL = 1e-8

#: Shrinking exponent grid used by the limit checks.
LIMIT_GRID = (0.5, 0.25, 0.125, 0.0625)


@dataclass(frozen=True)
class CheckResult:
    """Graded outcome of one check on one instance.

    ``margin`` is the signed worst-case slack of the check's inequality
    chain. ``details`` holds the per-sub-inequality margins. ``reverify``
    is filled by the harness for violated results: the same check rerun at
    solver tolerance divided by 100.
    """

    check_id: str
    instance_digest: str
    status: str
    margin: float
    details: dict
    reverify: dict = None

    def to_json(self):
        out = {
            "check_id": self.check_id,
            "instance_digest": self.instance_digest,
            "status": self.status,
            "margin": self.margin,
            "details": self.details,
        }
        if self.reverify is not None:
            out["reverify"] = self.reverify
        return out


def instance_digest(problem):
    """Stable hex digest of a problem's weights and matrices."""
    h = hashlib.sha256()
    h.update(np.ascontiguousarray(problem.weights).tobytes())
    h.update(np.ascontiguousarray(problem.matrices).tobytes())
    return h.hexdigest()[:16]


# ---------------------------------------------------------------------------
# grading helpers

def _status(margin, band):
    if margin >= band:
        return mj.HOLDS
    if margin <= -band:
        return mj.VIOLATED
    return mj.INDETERMINATE


def _combine(statuses):
    """Holds only if all hold; violated if any violated; else indeterminate."""
    if mj.VIOLATED in statuses:
        return mj.VIOLATED
    if all(s == mj.HOLDS for s in statuses):
        return mj.HOLDS
    return mj.INDETERMINATE


def _equality_grade(value, tol=EQUALITY_TOL):
    """Grade an equality residual: holds below tol, violated beyond 100x."""
    if value <= tol:
        return mj.HOLDS, tol - value
    if value > 100.0 * tol:
        return mj.VIOLATED, tol - value
    return mj.INDETERMINATE, tol - value


def _loewner_margin(smaller, larger):
    """Relative smallest eigenvalue of (larger - smaller)."""
    diff = hermitize(larger - smaller)
    scale = max(frobenius(larger), 1e-300)
    return float(np.linalg.eigvalsh(diff)[0]) / scale


def _tr(a):
    return float(np.trace(a).real)


def _schatten(a, p):
    """Schatten norm of a Hermitian PSD matrix."""
    ev = np.clip(np.linalg.eigvalsh(hermitize(a)), 0.0, None)
    if p == np.inf:
        return float(ev[-1])
    return float(np.sum(ev**p) ** (1.0 / p))


def _pair(problem):
    a, b = problem.matrices
    return a, b


def _solve_g(problem, cfg):
    """Cartan mean: two-matrix closed form, fixed-point solver otherwise."""
    if problem.m == 2:
        return geometric_geodesic(*_pair(problem), problem.weights[1]), True
    res = cartan_mean(problem, cfg)
    return res.value, res.converged


def _solve_omega(problem, cfg):
    """Wasserstein mean: two-matrix closed form, solver otherwise."""
    if problem.m == 2:
        return wasserstein_geodesic(*_pair(problem), problem.weights[1]), True
    res = wasserstein_barycenter(problem, cfg)
    return res.value, res.converged


def _solve_pt(problem, t, cfg):
    if problem.m == 2 and t == 0.5 and abs(problem.weights[0] - 0.5) <= 1e-12:
        a, b = _pair(problem)
        return 0.25 * (a + b + 2.0 * geometric_geodesic(a, b, 0.5)), True
    res = lim_palfia_mean(problem, t, cfg)
    return res.value, res.converged


def _decrease_margins(seq):
    """Relative step decreases of a nonnegative sequence, against its head."""
    scale = max(seq[0], 1e-300)
    return [(a - b) / scale for a, b in zip(seq, seq[1:])]


# ---------------------------------------------------------------------------
# the checks; each returns (status, margin, details)

def _check_agh_sandwich(problem, cfg, band):
    g, ok = _solve_g(problem, cfg)
    upper = _loewner_margin(g, arithmetic_mean(problem))
    lower = _loewner_margin(harmonic_mean(problem), g)
    margin = min(upper, lower)
    details = {"upper_margin": upper, "lower_margin": lower}
    if not ok:
        return mj.INDETERMINATE, margin, details | {"unconverged": True}
    return _status(margin, band), margin, details


def _check_thm1_g_logmaj_l(problem, cfg, band):
    g, ok = _solve_g(problem, cfg)
    lam_g = mj.spectrum(g)
    lam_l = mj.spectrum(log_euclidean_mean(problem))
    verdict = mj.log_majorization(lam_g, lam_l, band)
    gap = abs(float(np.sum(np.log(lam_l)) - np.sum(np.log(lam_g))))
    details = {
        "k_worst": verdict.k_worst,
        "full_product_gap": gap,
    }
    if not ok:
        return mj.INDETERMINATE, verdict.margin, details | {"unconverged": True}
    return verdict.status, verdict.margin, details


def _check_thm1_l_wlogmaj_omega(problem, cfg, band):
    omega, ok = _solve_omega(problem, cfg)
    lam_l = mj.spectrum(log_euclidean_mean(problem))
    lam_o = mj.spectrum(omega)
    verdict = mj.weak_log_majorization(lam_l, lam_o, band)
    details = {"k_worst": verdict.k_worst}
    if not ok:
        return mj.INDETERMINATE, verdict.margin, details | {"unconverged": True}
    return verdict.status, verdict.margin, details


def _check_thm2_p1(problem, cfg, band):
    # Run the solver from the identity even for two matrices: the first
    # iterate is then the one-half power mean and the trace history is the
    # monotone sequence the trace inequality rides on.
    res = wasserstein_barycenter(
        problem, SolverConfig(cfg.residual_tol, cfg.max_iter, "identity")
    )
    q = power_mean(problem, 0.5)
    tr_q, tr_o = _tr(q), _tr(res.value)
    margin = (tr_o - tr_q) / abs(tr_o)
    hist = res.trace_history
    mono = 0.0
    if len(hist) > 2:
        mono = min(
            (b - a) / max(1.0, abs(b)) for a, b in zip(hist[1:], hist[2:])
        )
    details = {
        "trace_margin": margin,
        "first_iterate_gap": abs(hist[1] - tr_q) / abs(tr_q) if len(hist) > 1 else 0.0,
        "trace_monotone_margin": mono,
        "final_trace_margin": (tr_o - hist[-1]) / abs(tr_o),
    }
    if not res.converged:
        return mj.INDETERMINATE, margin, details | {"unconverged": True}
    # Trace monotonicity is a non-strict inequality: exact equality is fine,
    # only a genuine decrease is a violation.
    if mono < -1e-12:
        return mj.VIOLATED, mono, details
    return _status(margin, band), margin, details


def _check_thm2_pinf(problem, cfg, band):
    omega, ok = _solve_omega(problem, cfg)
    top_q = mj.spectrum(power_mean(problem, 0.5))[0]
    top_o = mj.spectrum(omega)[0]
    margin = (top_o - top_q) / abs(top_o)
    details = {"top_eigenvalue_margin": margin}
    if not ok:
        return mj.INDETERMINATE, margin, details | {"unconverged": True}
    return _status(margin, band), margin, details


def _check_thm2_p2_m2(problem, cfg, band):
    omega, _ = _solve_omega(problem, cfg)
    nq = frobenius(power_mean(problem, 0.5))
    no = frobenius(omega)
    margin = (no - nq) / no
    return _status(margin, band), margin, {"frobenius_margin": margin}


def _check_conj1_weak_maj(problem, cfg, band):
    omega, ok = _solve_omega(problem, cfg)
    verdict = mj.weak_majorization(
        mj.spectrum(power_mean(problem, 0.5)), mj.spectrum(omega), band
    )
    details = {"k_worst": verdict.k_worst}
    if not ok:
        return mj.INDETERMINATE, verdict.margin, details | {"unconverged": True}
    return verdict.status, verdict.margin, details


def _check_eq26_kyfan(problem, cfg, band):
    a, b = _pair(problem)
    ra, rb = sqrtm(a), sqrtm(b)
    lhs = hermitize(a + b + ra @ rb + rb @ ra)
    p = product_sqrt(a, b)
    rhs = hermitize(a + b + p + p.conj().T)
    x = mj.spectrum(lhs)
    y = mj.spectrum(rhs)
    pref_x, pref_y = np.cumsum(x), np.cumsum(y)
    ky_margins = ((pref_y - pref_x) / pref_y[-1]).tolist()
    margin = float(min(ky_margins))
    details = {
        "ky_fan_margins": ky_margins,
        "schatten_margins": {
            "1": (pref_y[-1] - pref_x[-1]) / pref_y[-1],
            "2": (frobenius(rhs) - frobenius(lhs)) / frobenius(rhs),
            "inf": (y[0] - x[0]) / y[0],
        },
    }
    return _status(margin, band), margin, details


def _check_prop3_limit(problem, cfg, band):
    target = log_euclidean_mean(problem)
    dists = []
    converged = True
    for p in LIMIT_GRID:
        powered = MeanProblem(
            problem.weights, np.stack([powm(a, p) for a in problem.matrices])
        )
        g, ok = _solve_g(powered, cfg)
        converged = converged and ok
        dists.append(log_euclidean_distance(powm(g, 1.0 / p), target))
    steps = _decrease_margins(dists)
    margin = float(min(steps))
    details = {"grid": list(LIMIT_GRID), "distances": dists}
    if not converged:
        return mj.INDETERMINATE, margin, details | {"unconverged": True}
    return _status(margin, band), margin, details


def _check_prop4_monotone(problem, cfg, band):
    g0, ok0 = _solve_g(problem, cfg)
    # Rescale so the Cartan mean sits strictly below the identity; the mean
    # is homogeneous, so the scaled mean needs no second solve.
    alpha = (1.0 - 1e-3) / mj.spectrum(g0)[0]
    scaled = alpha * problem.matrices
    g = alpha * g0
    g_sq, ok1 = _solve_g(
        MeanProblem(problem.weights, np.stack([m @ m for m in scaled])), cfg
    )
    g_rt, ok2 = _solve_g(
        MeanProblem(problem.weights, np.stack([sqrtm(m) for m in scaled])), cfg
    )
    up = _loewner_margin(g_sq, g)     # G(A^2) <= G(A) when G(A) <= I
    down = _loewner_margin(g, g_rt)   # G(A^(1/2)) >= G(A) when G(A) <= I
    margin = min(up, down)
    details = {"power2_margin": up, "power_half_margin": down}
    if not (ok0 and ok1 and ok2):
        return mj.INDETERMINATE, margin, details | {"unconverged": True}
    return _status(margin, band), margin, details


def _check_eq21_limit(problem, cfg, band):
    target = log_euclidean_mean(problem)
    details = {"grid": list(LIMIT_GRID)}
    margins = []
    for sign, key in ((1.0, "distances_pos"), (-1.0, "distances_neg")):
        dists = [
            log_euclidean_distance(power_mean(problem, sign * p), target)
            for p in LIMIT_GRID
        ]
        details[key] = dists
        margins.append(min(_decrease_margins(dists)))
    margin = float(min(margins))
    return _status(margin, band), margin, details


def _check_eq29_compound(problem, cfg, band):
    g, ok = _solve_g(problem, cfg)
    errors = {}
    converged = ok
    for k in range(1, problem.n + 1):
        lifted = np.stack([compound(a, k) for a in problem.matrices])
        # Compounds of positive definite matrices are positive definite, but
        # the conditioning is raised to the k-th power; skip a level that has
        # degraded past double precision rather than certify noise.
        if min(np.linalg.eigvalsh(hermitize(m))[0] for m in lifted) <= 0.0:
            converged = False
            continue
        gk, okk = _solve_g(MeanProblem(problem.weights, lifted), cfg)
        converged = converged and okk
        ck = compound(g, k)
        errors[str(k)] = frobenius(gk - ck) / max(frobenius(gk), 1e-300)
    if not errors:
        return mj.INDETERMINATE, 0.0, {"relative_errors": {}, "unconverged": True}
    status, margin = _equality_grade(max(errors.values()))
    details = {"relative_errors": errors}
    if not converged:
        return mj.INDETERMINATE, margin, details | {"unconverged": True}
    return status, margin, details


def _check_eq34_char(problem, cfg, band):
    omega, ok = _solve_omega(problem, cfg)
    omega_inv = powm(omega, -1)
    acc = sum(
        w * geometric_geodesic(a, omega_inv, 0.5)
        for w, a in zip(problem.weights, problem.matrices)
    )
    residual = frobenius(acc - np.eye(problem.n))
    status, margin = _equality_grade(residual)
    details = {"characterization_residual": residual}
    if not ok:
        return mj.INDETERMINATE, margin, details | {"unconverged": True}
    return status, margin, details


def _check_eq38_trace(problem, cfg, band):
    a, b = _pair(problem)
    lhs = _tr(sqrtm(a) @ sqrtm(b))
    rhs = _tr(product_sqrt(a, b))
    margin = (rhs - lhs) / abs(rhs)
    return _status(margin, band), margin, {"trace_margin": margin}


def _check_prop5_i(problem, cfg, band):
    a, b = _pair(problem)
    cross = sqrtm(a) @ sqrtm(b)
    p = product_sqrt(a, b)
    lhs = _tr(cross @ cross)
    rhs = _tr(p @ p.conj().T)
    margin = (rhs - lhs) / abs(rhs)
    return _status(margin, band), margin, {"trace_margin": margin}


def _check_prop5_ii(problem, cfg, band):
    a, b = _pair(problem)
    lhs = _tr(powm(a, 1.5) @ sqrtm(b))
    rhs = _tr(a @ product_sqrt(a, b))
    margin = (rhs - lhs) / abs(rhs)
    return _status(margin, band), margin, {"trace_margin": margin}


def _check_eq42_chain(problem, cfg, band):
    a, b = _pair(problem)
    cross = sqrtm(a) @ sqrtm(b)
    p = product_sqrt(a, b)
    low = _tr(cross @ cross)
    mid = _tr(a @ b)
    high = _tr(p @ p.conj().T)
    scale = abs(high)
    first = (mid - low) / scale
    second = (high - mid) / scale
    margin = min(first, second)
    details = {"lieb_thirring_margin": first, "upper_margin": second}
    return _status(margin, band), margin, details


def _check_eq43_logmaj(problem, cfg, band):
    a, b = _pair(problem)
    a34 = powm(a, 0.75)
    ra = sqrtm(a)
    lhs = hermitize(a34 @ sqrtm(b) @ a34)
    rhs = hermitize(ra @ sqrtm(hermitize(ra @ b @ ra)) @ ra)
    verdict = mj.log_majorization(mj.spectrum(lhs), mj.spectrum(rhs), band)
    return verdict.status, verdict.margin, {"k_worst": verdict.k_worst}


def _check_eq46_det(problem, cfg, band):
    a, b = _pair(problem)
    omega = wasserstein_geodesic(a, b, 0.5)
    q = power_mean(problem, 0.5)
    margin = float(
        np.sum(np.log(mj.spectrum(q))) - np.sum(np.log(mj.spectrum(omega)))
    )
    return _status(margin, band), margin, {"log_det_gap": margin}


def _check_eq49_pt_qt(problem, cfg, band):
    margins = {}
    converged = True
    for t in (0.25, 0.5, 0.75):
        pt, ok = _solve_pt(problem, t, cfg)
        converged = converged and ok
        qt = power_mean(problem, t)
        for p, label in ((1, "1"), (2, "2"), (np.inf, "inf")):
            nq = _schatten(qt, p)
            margins[f"t={t},p={label}"] = (nq - _schatten(pt, p)) / nq
    margin = float(min(margins.values()))
    details = {"schatten_margins": margins}
    if not converged:
        return mj.INDETERMINATE, margin, details | {"unconverged": True}
    return _status(margin, band), margin, details


def _check_eq51_special(problem, cfg, band):
    a, b = _pair(problem)
    lhs = hermitize(a + b + 2.0 * geometric_geodesic(a, b, 0.5))
    ra, rb = sqrtm(a), sqrtm(b)
    rhs = hermitize(a + b + ra @ rb + rb @ ra)
    x, y = mj.spectrum(lhs), mj.spectrum(rhs)
    asserted = {
        "1": (np.sum(y) - np.sum(x)) / np.sum(y),
        "2": (frobenius(rhs) - frobenius(lhs)) / frobenius(rhs),
        "inf": (y[0] - x[0]) / y[0],
    }
    pref_x, pref_y = np.cumsum(x), np.cumsum(y)
    ky = ((pref_y - pref_x) / pref_y[-1]).tolist()
    margin = float(min(asserted.values()))
    details = {"schatten_margins": asserted, "ky_fan_margins_exploratory": ky}
    return _status(margin, band), margin, details


def _eq52_matrices(a, b):
    ira = invsqrtm(a)
    inner = sqrtm(hermitize(ira @ b @ ira))
    m1 = powm(a, 1.5) @ inner @ sqrtm(a)   # A^2 (A^(-1) B)^(1/2)
    m2 = powm(a, 1.5) @ sqrtm(b)           # A^(3/2) B^(1/2)
    m3 = a @ product_sqrt(a, b)            # A (AB)^(1/2)
    return m1, m2, m3


def _check_eq52_chain(problem, cfg, band):
    a, b = _pair(problem)
    s1, s2, s3 = (mj.spectrum(m) for m in _eq52_matrices(a, b))
    v1 = mj.log_majorization(s1, s2, band)
    v2 = mj.log_majorization(s2, s3, band)
    margin = min(v1.margin, v2.margin)
    details = {"first_margin": v1.margin, "second_margin": v2.margin}
    return _combine([v1.status, v2.status]), margin, details


def _check_eq53_traces(problem, cfg, band):
    a, b = _pair(problem)
    t1, t2, t3 = (_tr(m) for m in _eq52_matrices(a, b))
    scale = abs(t3)
    first = (t2 - t1) / scale
    second = (t3 - t2) / scale
    margin = min(first, second)
    details = {"first_margin": first, "second_margin": second}
    return _status(margin, band), margin, details


def _check_eq54_lambda(problem, cfg, band):
    lam_l = mj.spectrum(log_euclidean_mean(problem))
    lam_q = mj.spectrum(power_mean(problem, 0.5))
    entrywise = float(np.min((lam_q - lam_l) / lam_q))
    grid = [-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0]
    spectra = [
        lam_l if p == 0.0 else mj.spectrum(power_mean(problem, p)) for p in grid
    ]
    grid_margin = min(
        float(np.min((hi - lo) / hi)) for lo, hi in zip(spectra, spectra[1:])
    )
    margin = min(entrywise, grid_margin)
    details = {"entrywise_margin": entrywise, "grid_margin": grid_margin}
    return _status(margin, band), margin, details


def _check_omega_le_arith(problem, cfg, band):
    omega, ok = _solve_omega(problem, cfg)
    margin = _loewner_margin(omega, arithmetic_mean(problem))
    details = {"loewner_margin": margin}
    if not ok:
        return mj.INDETERMINATE, margin, details | {"unconverged": True}
    return _status(margin, band), margin, details


# ---------------------------------------------------------------------------
# search-only relations: stated by the theory to fail in general

def _check_g_leq_omega(problem, cfg, band):
    omega, ok0 = _solve_omega(problem, cfg)
    g, ok1 = _solve_g(problem, cfg)
    margin = _loewner_margin(g, omega)
    details = {"loewner_margin": margin}
    if not (ok0 and ok1):
        return mj.INDETERMINATE, margin, details | {"unconverged": True}
    return _status(margin, band), margin, details


def _check_omega_ge_harmonic(problem, cfg, band):
    omega, ok = _solve_omega(problem, cfg)
    margin = _loewner_margin(harmonic_mean(problem), omega)
    details = {"loewner_margin": margin}
    if not ok:
        return mj.INDETERMINATE, margin, details | {"unconverged": True}
    return _status(margin, band), margin, details


def _check_eq49_general_norms(problem, cfg, band):
    """Ky Fan comparison of the power-type and power means for all k, at
    several t: the unitarily-invariant-norm strengthening left open."""
    margins = {}
    converged = True
    for t in (0.25, 0.5, 0.75):
        pt, ok = _solve_pt(problem, t, cfg)
        converged = converged and ok
        verdict = mj.weak_majorization(
            mj.spectrum(pt), mj.spectrum(power_mean(problem, t)), band
        )
        margins[f"t={t}"] = verdict.margin
    margin = float(min(margins.values()))
    details = {"ky_fan_margins": margins}
    if not converged:
        return mj.INDETERMINATE, margin, details | {"unconverged": True}
    return _status(margin, band), margin, details


# ---------------------------------------------------------------------------
# registry

@dataclass(frozen=True)
class Check:
    func: object
    needs: str          # "problem" | "pair" | "pair_equal"
    exploratory: bool


CHECKS = {
    "agh_sandwich": Check(_check_agh_sandwich, "problem", False),
    "thm1_g_logmaj_l": Check(_check_thm1_g_logmaj_l, "problem", False),
    "thm1_l_wlogmaj_omega": Check(_check_thm1_l_wlogmaj_omega, "problem", False),
    "thm2_p1": Check(_check_thm2_p1, "problem", False),
    "thm2_pinf": Check(_check_thm2_pinf, "problem", False),
    "thm2_p2_m2": Check(_check_thm2_p2_m2, "pair", False),
    "conj1_weak_maj": Check(_check_conj1_weak_maj, "problem", True),
    "eq26_kyfan": Check(_check_eq26_kyfan, "pair_equal", True),
    "prop3_limit": Check(_check_prop3_limit, "problem", False),
    "prop4_monotone": Check(_check_prop4_monotone, "problem", False),
    "eq21_limit": Check(_check_eq21_limit, "problem", False),
    "eq29_compound": Check(_check_eq29_compound, "problem", False),
    "eq34_char": Check(_check_eq34_char, "problem", False),
    "eq38_trace": Check(_check_eq38_trace, "pair", False),
    "prop5_i": Check(_check_prop5_i, "pair", False),
    "prop5_ii": Check(_check_prop5_ii, "pair", False),
    "eq42_chain": Check(_check_eq42_chain, "pair", False),
    "eq43_logmaj": Check(_check_eq43_logmaj, "pair", False),
    "eq46_det": Check(_check_eq46_det, "pair_equal", False),
    "eq49_pt_qt": Check(_check_eq49_pt_qt, "problem", False),
    "eq51_special": Check(_check_eq51_special, "pair_equal", False),
    "eq52_chain": Check(_check_eq52_chain, "pair", False),
    "eq53_traces": Check(_check_eq53_traces, "pair", False),
    "eq54_lambda": Check(_check_eq54_lambda, "problem", False),
    "omega_le_arith": Check(_check_omega_le_arith, "problem", False),
}

#: Relations only meaningful as counterexample-search targets: the theory
#: says they fail in general, so hits are findings, not defects.
SEARCH_TARGETS = {
    "g_leq_omega": Check(_check_g_leq_omega, "problem", True),
    "omega_ge_harmonic": Check(_check_omega_ge_harmonic, "problem", True),
    "eq49_general_norms": Check(_check_eq49_general_norms, "problem", True),
}


def adapt_problem(check, problem):
    """Cut a problem down to what a pair check needs (first two matrices)."""
    if check.needs == "problem" or problem.m == 2 and check.needs == "pair":
        return problem
    if check.needs == "pair":
        w = problem.weights[:2]
        tot = float(w.sum())
        w = np.array([0.5, 0.5]) if tot <= 0.0 else w / tot
        return MeanProblem(w, problem.matrices[:2])
    if check.needs == "pair_equal":
        return MeanProblem(np.array([0.5, 0.5]), problem.matrices[:2])
    raise ValueError(f"unknown adaptation {check.needs!r}")


def _validate_instance(check_id, check, problem):
    if check.needs in ("pair", "pair_equal") and problem.m != 2:
        raise IncompatibleInstanceError(
            f"{check_id} needs exactly 2 matrices, got {problem.m}"
        )
    if check.needs == "pair_equal" and abs(problem.weights[0] - 0.5) > 1e-12:
        raise IncompatibleInstanceError(f"{check_id} needs equal weights")


def run_check(check_id, problem, cfg=SolverConfig(), band=mj.DEFAULT_BAND):
    """Run one named check on a problem instance.

    Raises :class:`IncompatibleInstanceError` when the instance shape does
    not fit the check (pair checks need exactly two matrices). Solver
    non-convergence inside a check degrades the verdict to indeterminate
    instead of raising.
    """
    registry = CHECKS | SEARCH_TARGETS
    if check_id not in registry:
        raise KeyError(f"unknown check id {check_id!r}")
    check = registry[check_id]
    _validate_instance(check_id, check, problem)
    status, margin, details = check.func(problem, cfg, band)
    return CheckResult(check_id, instance_digest(problem), status, float(margin), details)
