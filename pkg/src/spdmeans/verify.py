"""Suite runner and counterexample search over the check catalog.

A suite run draws ``trials`` independent seeded instances from a random
ensemble, evaluates every requested check on each, and aggregates into a
:class:`Report`. Everything is a pure function of (suite, ensemble,
trials, solver config, band): per-trial seeds are derived up front from
the master seed, so a parallel run and a sequential run produce identical
reports.

Any violated verdict is re-verified by rerunning the check at solver
tolerance divided by 100: if the violation does not persist it is demoted
to indeterminate, so every violation that reaches a report carries its
tightened-tolerance confirmation.
"""

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import __version__
from .checks import (
    CHECKS,
    SEARCH_TARGETS,
    CheckResult,
    adapt_problem,
    instance_digest,
    run_check,
)
from .core import frobenius
from .ensembles import random_spd, random_weights
from .majorization import DEFAULT_BAND, HOLDS, INDETERMINATE, VIOLATED
from .means import MeanProblem, SolverConfig, wasserstein_barycenter

__all__ = [
    "SUITES",
    "Report",
    "run_suite",
    "search_counterexamples",
    "resolve_suite",
]

SUITES = {
    "theorem1": ["thm1_g_logmaj_l", "thm1_l_wlogmaj_omega"],
    "theorem2": ["thm2_p1", "thm2_pinf", "thm2_p2_m2"],
    "proposition5": [
        "eq38_trace",
        "prop5_i",
        "prop5_ii",
        "eq42_chain",
        "eq43_logmaj",
    ],
    "limits": ["prop3_limit", "eq21_limit"],
    "remarks": [
        "eq46_det",
        "eq49_pt_qt",
        "eq51_special",
        "eq52_chain",
        "eq53_traces",
        "eq54_lambda",
    ],
}
SUITES["all"] = sorted(CHECKS)


def resolve_suite(suite):
    """Turn a suite name, comma list, or id list into check ids."""
    if isinstance(suite, str):
        if suite in SUITES:
            return list(SUITES[suite])
        suite = [s.strip() for s in suite.split(",") if s.strip()]
    unknown = [s for s in suite if s not in CHECKS]
    if unknown:
        raise KeyError(f"unknown suite or check ids: {unknown}")
    return list(suite)


@dataclass(frozen=True)
class Report:
    """Aggregated outcome of a suite run, reproducible from its seed."""

    suite: list
    ensemble: dict
    trials: int
    seed: int
    band: float
    solver: dict
    results: list
    violations: list
    asserted_violations: int
    wall_clock_s: float
    version: str

    def to_json(self):
        return {
            "suite": self.suite,
            "ensemble": self.ensemble,
            "trials": self.trials,
            "seed": self.seed,
            "band": self.band,
            "solver": self.solver,
            "results": self.results,
            "violations": self.violations,
            "asserted_violations": self.asserted_violations,
            "wall_clock_s": self.wall_clock_s,
            "version": self.version,
        }


def _ensemble_json(ensemble):
    return {
        "n": ensemble.n,
        "m": ensemble.m,
        "cond_range": list(ensemble.cond_range),
        "field": ensemble.field,
        "seed": ensemble.seed,
        "commuting": ensemble.commuting,
    }


def _solver_json(cfg):
    init = cfg.init if isinstance(cfg.init, (str, type(None))) else "explicit"
    return {"residual_tol": cfg.residual_tol, "max_iter": cfg.max_iter, "init": init}


def _trial_problem(ensemble, trial_seed):
    mats = random_spd(replace(ensemble, seed=int(trial_seed[0])))
    weights = random_weights(ensemble.m, int(trial_seed[1]))
    return MeanProblem(weights, mats)


def _reverified(check_id, problem, cfg, band):
    tight = SolverConfig(cfg.residual_tol / 100.0, cfg.max_iter, cfg.init)
    rerun = run_check(check_id, problem, tight, band)
    return {
        "residual_tol": tight.residual_tol,
        "status": rerun.status,
        "margin": rerun.margin,
    }


def _checked_with_reverify(check_id, problem, cfg, band):
    """Run a check; confirm any violation at tightened tolerance or demote it."""
    result = run_check(check_id, problem, cfg, band)
    if result.status != VIOLATED:
        return result
    confirm = _reverified(check_id, problem, cfg, band)
    if confirm["status"] == VIOLATED:
        return replace(result, reverify=confirm)
    return replace(
        result,
        status=INDETERMINATE,
        details=result.details | {"demoted": "violation vanished at tight tolerance"},
        reverify=confirm,
    )


def _run_trial(args):
    ensemble, trial_seed, ids, cfg, band = args
    problem = _trial_problem(ensemble, trial_seed)
    out = []
    for check_id in ids:
        adapted = adapt_problem(CHECKS[check_id], problem)
        out.append(_checked_with_reverify(check_id, adapted, cfg, band))
    return out


def _trial_seeds(seed, trials):
    return np.random.SeedSequence(seed).generate_state(2 * trials, np.uint64).reshape(
        trials, 2
    )


def run_suite_detailed(
    suite,
    ensemble,
    trials,
    cfg=SolverConfig(),
    band=DEFAULT_BAND,
    jobs=1,
):
    """Like :func:`run_suite` but also returns the per-trial margin rows
    ``(check_id, trial, digest, status, margin)`` for CSV export."""
    ids = resolve_suite(suite)
    started = time.monotonic()
    seeds = _trial_seeds(ensemble.seed, trials)
    tasks = [(ensemble, seeds[i], ids, cfg, band) for i in range(trials)]
    if jobs == 1:
        per_trial = [_run_trial(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            per_trial = list(pool.map(_run_trial, tasks, chunksize=4))

    results = []
    violations = []
    rows = []
    asserted_violations = 0
    for pos, check_id in enumerate(ids):
        counts = {HOLDS: 0, VIOLATED: 0, INDETERMINATE: 0}
        worst = None
        for trial, outcomes in enumerate(per_trial):
            r = outcomes[pos]
            counts[r.status] += 1
            rows.append((check_id, trial, r.instance_digest, r.status, r.margin))
            if worst is None or r.margin < worst.margin:
                worst = r
            if r.status == VIOLATED:
                violations.append(r.to_json() | {"trial": trial})
                if not CHECKS[check_id].exploratory:
                    asserted_violations += 1
        results.append(
            {
                "check_id": check_id,
                "exploratory": CHECKS[check_id].exploratory,
                "status_counts": counts,
                "worst_margin": worst.margin,
                "worst_instance_digest": worst.instance_digest,
            }
        )
    report = Report(
        suite=ids,
        ensemble=_ensemble_json(ensemble),
        trials=trials,
        seed=ensemble.seed,
        band=band,
        solver=_solver_json(cfg),
        results=results,
        violations=violations,
        asserted_violations=asserted_violations,
        wall_clock_s=time.monotonic() - started,
        version=__version__,
    )
    return report, rows


def run_suite(suite, ensemble, trials, cfg=SolverConfig(), band=DEFAULT_BAND, jobs=1):
    """Run every check of a suite over seeded random instances.

    Parameters
    ----------
    suite : str or list of str
        Suite name (``theorem1``, ``theorem2``, ``proposition5``,
        ``limits``, ``remarks``, ``all``) or explicit check ids.
    ensemble : EnsembleConfig
        Instance generator; its seed is the master seed of the run.
    trials : int
        Number of independent instances.
    jobs : int
        Worker processes; the report does not depend on this.

    Returns
    -------
    Report
    """
    return run_suite_detailed(suite, ensemble, trials, cfg, band, jobs)[0]


# ---------------------------------------------------------------------------
# counterexample search

CONJECTURE_TARGETS = {"conj1_weak_maj", "eq26_kyfan", "eq49_general_norms"}
BUMP_SIZES = (0.01, 0.1, 1.0)


def _monotonicity_trial(problem, rng, eps, cfg, band):
    """Bump one matrix upward (rank-1 PSD, norm eps) and compare barycenters."""
    j = int(rng.integers(problem.m))
    v = rng.standard_normal(problem.n)
    if np.iscomplexobj(problem.matrices):
        v = v + 1j * rng.standard_normal(problem.n)
    v = v / np.linalg.norm(v)
    bump = eps * np.outer(v, v.conj())
    bumped_mats = problem.matrices.copy()
    bumped_mats[j] = bumped_mats[j] + bump
    bumped = MeanProblem(problem.weights, bumped_mats)

    def margin_at(tol_cfg):
        base = wasserstein_barycenter(problem, tol_cfg)
        up = wasserstein_barycenter(bumped, tol_cfg)
        diff = up.value - base.value
        ev = float(np.linalg.eigvalsh(0.5 * (diff + diff.conj().T))[0])
        return ev / max(frobenius(base.value), 1e-300), base.converged and up.converged

    margin, ok = margin_at(cfg)
    details = {"bumped_index": j, "bump_norm": eps, "loewner_margin": margin}
    if not ok:
        return INDETERMINATE, margin, details
    if margin >= band:
        return HOLDS, margin, details
    if margin <= -band:
        return VIOLATED, margin, details
    return INDETERMINATE, margin, details


def search_counterexamples(
    target,
    ensemble,
    trials,
    cfg=SolverConfig(),
    band=DEFAULT_BAND,
):
    """Hunt for violations of a relation over seeded random instances.

    ``target`` is ``omega_monotonicity``, one of the search-only relations
    (``g_leq_omega``, ``omega_ge_harmonic``, ``eq49_general_norms``), or
    any catalog check id. Returns the violated results only; every one has
    been re-verified at ``residual_tol / 100`` and carries that record.
    Hits against open conjectures are flagged for escalated scrutiny
    rather than trusted.
    """
    known = set(CHECKS) | set(SEARCH_TARGETS) | {"omega_monotonicity"}
    if target not in known:
        raise KeyError(f"unknown search target {target!r}")
    seeds = _trial_seeds(ensemble.seed, trials)
    hits = []
    for i in range(trials):
        problem = _trial_problem(ensemble, seeds[i])
        if target == "omega_monotonicity":
            rng = np.random.default_rng(int(seeds[i][1]) ^ 0x5EED)
            eps = BUMP_SIZES[i % len(BUMP_SIZES)]
            status, margin, details = _monotonicity_trial(problem, rng, eps, cfg, band)
            if status != VIOLATED:
                continue
            tight = SolverConfig(cfg.residual_tol / 100.0, cfg.max_iter, cfg.init)
            t_status, t_margin, _ = _monotonicity_trial(problem, np.random.default_rng(
                int(seeds[i][1]) ^ 0x5EED), eps, tight, band)
            if t_status != VIOLATED:
                continue
            hits.append(
                CheckResult(
                    "omega_monotonicity",
                    instance_digest(problem),
                    VIOLATED,
                    margin,
                    details | {"trial": i},
                    {"residual_tol": tight.residual_tol, "status": t_status,
                     "margin": t_margin},
                )
            )
            continue
        spec = (CHECKS | SEARCH_TARGETS)[target]
        adapted = adapt_problem(spec, problem)
        result = _checked_with_reverify(target, adapted, cfg, band)
        if result.status == VIOLATED:
            if target in CONJECTURE_TARGETS:
                result = replace(
                    result,
                    details=result.details
                    | {"flag": "conjecture-contradicting; escalate scrutiny"},
                )
            hits.append(result)
    return hits
