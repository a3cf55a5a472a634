"""Command-line interface.

Exit codes are a stable contract:

* 0 - success
* 1 - usage or input error
* 2 - solver did not converge (``compute`` only)
* 3 - an asserted check was violated (``verify`` / ``report`` only)

Randomized commands (``verify``, ``search``) require an explicit ``--seed``;
there is no implicit clock seeding. Diagnostics go to standard error;
standard output carries JSON only (when no ``--output`` file is given).
"""

import argparse
import json
import sys

from . import __version__
from .ensembles import EnsembleConfig
from .errors import SpdMeansError
from .majorization import DEFAULT_BAND
from .means import (
    SolverConfig,
    arithmetic_mean,
    cartan_mean,
    harmonic_mean,
    lim_palfia_mean,
    log_euclidean_mean,
    power_mean,
    wasserstein_barycenter,
)
from .metrics import METRICS
from .serialization import (
    dump_json,
    load_json,
    matrix_from_json,
    matrix_to_json,
    problem_from_json,
    solver_result_to_json,
    write_margins_csv,
)
from .verify import resolve_suite, run_suite_detailed, search_counterexamples

CLOSED_FORM_MEANS = {
    "arithmetic": arithmetic_mean,
    "harmonic": harmonic_mean,
    "log-euclidean": log_euclidean_mean,
}


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; the contract here says 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _emit(payload, output):
    if output is None:
        print(dump_json(payload))
    else:
        dump_json(payload, output)


def _solver_config(args):
    return SolverConfig(residual_tol=args.residual_tol, max_iter=args.max_iter)


def _ensemble(args):
    return EnsembleConfig(
        n=args.n,
        m=args.m,
        cond_range=(args.cond[0], args.cond[1]),
        field=args.field,
        seed=args.seed,
        commuting=args.commuting,
    )


def cmd_compute(args):
    problem = problem_from_json(load_json(args.input))
    if args.mean in CLOSED_FORM_MEANS:
        value = CLOSED_FORM_MEANS[args.mean](problem)
        _emit({"mean": args.mean, "value": matrix_to_json(value)}, args.output)
        return 0
    if args.mean == "power":
        if args.exponent is None:
            raise SpdMeansError("--exponent is required for the power mean")
        value = power_mean(problem, args.exponent)
        _emit(
            {"mean": args.mean, "exponent": args.exponent, "value": matrix_to_json(value)},
            args.output,
        )
        return 0
    cfg = _solver_config(args)
    if args.mean == "cartan":
        result = cartan_mean(problem, cfg)
    elif args.mean == "wasserstein":
        result = wasserstein_barycenter(problem, cfg)
    else:  # lim-palfia
        if args.t is None:
            raise SpdMeansError("--t is required for the lim-palfia mean")
        result = lim_palfia_mean(problem, args.t, cfg)
    payload = {"mean": args.mean} | solver_result_to_json(result)
    if args.mean == "lim-palfia":
        payload["t"] = args.t
    _emit(payload, args.output)
    return 0 if result.converged else 2


def cmd_distance(args):
    obj = load_json(args.input)
    try:
        a = matrix_from_json(obj["a"])
        b = matrix_from_json(obj["b"])
    except (KeyError, TypeError) as exc:
        raise SpdMeansError(f'input must hold matrices under "a" and "b": {exc}')
    metric = args.metric.replace("-", "_")
    value = METRICS[metric](a, b)
    _emit({"metric": args.metric, "value": value}, args.output)
    return 0


def cmd_verify(args):
    ids = resolve_suite(args.suite)
    report, rows = run_suite_detailed(
        ids,
        _ensemble(args),
        args.trials,
        _solver_config(args),
        args.band,
        jobs=args.jobs,
    )
    _emit(report.to_json(), args.output)
    if args.csv is not None:
        write_margins_csv(rows, args.csv)
    for line in _summary_lines(report.to_json()):
        print(line, file=sys.stderr)
    return 3 if report.asserted_violations > 0 else 0


def cmd_search(args):
    hits = search_counterexamples(
        args.target.replace("-", "_"),
        _ensemble(args),
        args.trials,
        _solver_config(args),
        args.band,
    )
    payload = {
        "target": args.target,
        "trials": args.trials,
        "seed": args.seed,
        "hits": [h.to_json() for h in hits],
    }
    _emit(payload, args.output)
    print(f"{len(hits)} re-verified hit(s) for {args.target}", file=sys.stderr)
    return 0


def _summary_lines(report):
    yield f"suite of {len(report['suite'])} check(s), {report['trials']} trial(s), seed {report['seed']}"
    for row in report["results"]:
        counts = row["status_counts"]
        tag = " (exploratory)" if row["exploratory"] else ""
        yield (
            f"  {row['check_id']:<22} holds={counts['holds']:<5} "
            f"indeterminate={counts['indeterminate']:<5} violated={counts['violated']:<5} "
            f"worst_margin={row['worst_margin']:+.3e}{tag}"
        )
    yield f"asserted violations: {report['asserted_violations']}"


def cmd_report(args):
    report = load_json(args.input)
    try:
        for line in _summary_lines(report):
            print(line, file=sys.stderr)
        if args.csv is not None:
            rows = [
                (r["check_id"], "worst", r["worst_instance_digest"], "", r["worst_margin"])
                for r in report["results"]
            ]
            write_margins_csv(rows, args.csv)
        violated = report["asserted_violations"]
    except (KeyError, TypeError) as exc:
        raise SpdMeansError(f"not a verification report: {exc}")
    return 3 if violated > 0 else 0


def _add_solver_flags(p):
    p.add_argument("--residual-tol", type=float, default=1e-12, help="relative solver residual")
    p.add_argument("--max-iter", type=int, default=500, help="solver iteration cap")


def _add_ensemble_flags(p):
    p.add_argument("--n", type=int, default=3, help="matrix dimension")
    p.add_argument("--m", type=int, default=3, help="matrices per instance")
    p.add_argument("--cond", type=float, nargs=2, default=(1.0, 100.0),
                   metavar=("LO", "HI"), help="condition number range")
    p.add_argument("--field", choices=("real", "complex"), default="real")
    p.add_argument("--commuting", action="store_true",
                   help="draw the matrices in one shared eigenbasis")
    p.add_argument("--seed", type=int, required=True,
                   help="master seed (required: runs must be reproducible)")
    p.add_argument("--band", type=float, default=DEFAULT_BAND,
                   help="three-way verdict tolerance band")


def build_parser():
    parser = _Parser(prog="spdmeans", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="compute a mean of a problem file")
    p.add_argument("--input", required=True, help="MeanProblem JSON path")
    p.add_argument("--output", help="output JSON path (default: stdout)")
    p.add_argument(
        "--mean",
        required=True,
        choices=("arithmetic", "harmonic", "log-euclidean", "power",
                 "cartan", "wasserstein", "lim-palfia"),
    )
    p.add_argument("--exponent", type=float, help="power-mean exponent")
    p.add_argument("--t", type=float, help="lim-palfia parameter in (0,1)")
    _add_solver_flags(p)
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("distance", help="distance between two matrices")
    p.add_argument("--input", required=True, help='JSON path with "a" and "b"')
    p.add_argument("--output", help="output JSON path (default: stdout)")
    p.add_argument(
        "--metric",
        required=True,
        choices=("bures-wasserstein", "cartan", "log-euclidean", "hellinger"),
    )
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("verify", help="run an inequality suite over a random ensemble")
    p.add_argument("--suite", required=True,
                   help="theorem1|theorem2|proposition5|limits|remarks|all or id list")
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.add_argument("--output", help="Report JSON path (default: stdout)")
    p.add_argument("--csv", help="also write per-trial margins CSV here")
    _add_ensemble_flags(p)
    _add_solver_flags(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("search", help="hunt for counterexamples to a relation")
    p.add_argument("--target", required=True,
                   help="omega-monotonicity|g-leq-omega|omega-ge-harmonic|"
                        "conj1-weak-maj|eq26-kyfan|eq49-general-norms|<check id>")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--output", help="findings JSON path (default: stdout)")
    _add_ensemble_flags(p)
    _add_solver_flags(p)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("report", help="summarize a stored verification report")
    p.add_argument("--input", required=True, help="Report JSON path")
    p.add_argument("--csv", help="write per-check worst margins CSV here")
    p.set_defaults(func=cmd_report)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SpdMeansError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"spdmeans: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
