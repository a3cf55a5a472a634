"""Shared helpers for the test suite."""

import numpy as np
import pytest

from spdmeans import EnsembleConfig, MeanProblem, random_spd, random_weights


def spd_pair(seed, n=3, cond=(1.0, 100.0), field="real"):
    """Two random SPD matrices as plain arrays."""
    a, b = random_spd(EnsembleConfig(n=n, m=2, cond_range=cond, field=field, seed=seed))
    return a.mat, b.mat


def random_problem(seed, n=3, m=3, cond=(1.0, 100.0), field="real", weights="random"):
    mats = random_spd(EnsembleConfig(n=n, m=m, cond_range=cond, field=field, seed=seed))
    if weights == "uniform":
        w = np.full(m, 1.0 / m)
    else:
        w = random_weights(m, seed + 10_000)
    return MeanProblem(w, mats)


def commuting_problem(seed, n=3, m=3, field="real"):
    cfg = EnsembleConfig(
        n=n, m=m, cond_range=(1.0, 50.0), field=field, seed=seed, commuting=True
    )
    return MeanProblem(np.full(m, 1.0 / m), random_spd(cfg))


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
