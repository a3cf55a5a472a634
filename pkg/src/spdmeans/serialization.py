"""JSON and CSV interchange formats.

Matrix JSON, shared by every entry point:

    {"n": 3, "field": "real" | "complex", "data": [...]}

``data`` is the row-major flat list of entries; complex entries are
``[re, im]`` pairs. Problems are ``{"weights": [...], "matrices": [...]}``
and solver results mirror :class:`spdmeans.means.SolverResult`.
"""

import csv
import json

import numpy as np

from .core import validate_spd
from .errors import SpdMeansError
from .means import MeanProblem

__all__ = [
    "matrix_to_json",
    "matrix_from_json",
    "problem_to_json",
    "problem_from_json",
    "solver_result_to_json",
    "load_json",
    "dump_json",
    "write_margins_csv",
]


def matrix_to_json(a):
    a = np.asarray(a)
    n = a.shape[0]
    if np.iscomplexobj(a):
        data = [[float(z.real), float(z.imag)] for z in a.ravel()]
        return {"n": n, "field": "complex", "data": data}
    return {"n": n, "field": "real", "data": [float(x) for x in a.ravel()]}


def matrix_from_json(obj, validate=True):
    """Parse matrix JSON; validates positive definiteness unless told not to."""
    try:
        n = int(obj["n"])
        field = obj["field"]
        data = obj["data"]
    except (KeyError, TypeError) as exc:
        raise SpdMeansError(f"malformed matrix object: {exc}") from exc
    if field not in ("real", "complex"):
        raise SpdMeansError(f"unknown field {field!r}")
    if len(data) != n * n:
        raise SpdMeansError(f"expected {n * n} entries, got {len(data)}")
    if field == "complex":
        flat = np.array([complex(re, im) for re, im in data])
    else:
        flat = np.array([float(x) for x in data])
    mat = flat.reshape(n, n)
    if validate:
        return validate_spd(mat).mat
    return mat


def problem_to_json(problem):
    return {
        "weights": [float(w) for w in problem.weights],
        "matrices": [matrix_to_json(a) for a in problem.matrices],
    }


def problem_from_json(obj):
    try:
        weights = obj["weights"]
        matrices = obj["matrices"]
    except (KeyError, TypeError) as exc:
        raise SpdMeansError(f"malformed problem object: {exc}") from exc
    mats = [matrix_from_json(m) for m in matrices]
    return MeanProblem(np.asarray(weights, dtype=float), mats)


def solver_result_to_json(result):
    return {
        "value": matrix_to_json(result.value),
        "residual": result.residual,
        "iterations": result.iterations,
        "converged": result.converged,
        "trace_history": list(result.trace_history),
    }


def load_json(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def dump_json(obj, path=None):
    """Serialize with sorted keys (stable bytes for identical content)."""
    text = json.dumps(obj, indent=2, sort_keys=True)
    if path is None:
        return text
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
        fh.write("\n")
    return None


def write_margins_csv(rows, path):
    """Write per-trial margin rows (check_id, trial, digest, status, margin)."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["check_id", "trial", "instance_digest", "status", "margin"])
        for row in rows:
            writer.writerow(row)
