"""Seeded random ensembles of positive definite matrices.

Every draw is a pure function of the configuration: matrix ``j`` comes from
its own substream spawned off the master seed, so generating the matrices in
parallel or in sequence gives bitwise-identical output, and the same seed
always reproduces the same ensemble.
"""

from dataclasses import dataclass

import numpy as np

from .core import SpdMatrix, hermitize, validate_spd
from .errors import ParameterError

__all__ = [
    "EnsembleConfig",
    "haar_unitary",
    "random_spd",
    "random_commuting_spd",
    "random_weights",
]


@dataclass(frozen=True)
class EnsembleConfig:
    """Parameters of a random SPD ensemble.

    Attributes
    ----------
    n : int
        Matrix dimension.
    m : int
        Number of matrices.
    cond_range : (float, float)
        Bounds on the condition number of each matrix. The realized
        condition number is drawn log-uniformly between them (for ``n >= 2``).
    field : str
        ``"real"`` or ``"complex"`` scalars.
    seed : int
        Master seed; all randomness derives from it.
    commuting : bool
        Draw all matrices in one shared Haar eigenbasis, making the family
        exactly commuting (the closed-form regression regime).
    """

    n: int
    m: int
    cond_range: tuple = (1.0, 100.0)
    field: str = "real"
    seed: int = 0
    commuting: bool = False

    def __post_init__(self):
        lo, hi = self.cond_range
        if not (1.0 <= lo <= hi):
            raise ParameterError(f"need 1 <= low <= high, got cond_range={self.cond_range}")
        if self.n < 1 or self.m < 1:
            raise ParameterError(f"need n >= 1 and m >= 1, got n={self.n}, m={self.m}")
        if self.field not in ("real", "complex"):
            raise ParameterError(f"field must be 'real' or 'complex', got {self.field!r}")


def haar_unitary(n, rng, field="real"):
    """Haar-distributed orthogonal (real) or unitary (complex) matrix.

    QR of a Gaussian matrix with the phases of the R diagonal folded back
    into Q, which makes the distribution exactly Haar rather than merely
    orthogonal.
    """
    if field == "real":
        z = rng.standard_normal((n, n))
    else:
        z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def _spectrum_for(cond_range, n, rng):
    """Log-uniform positive eigenvalues realizing a condition number drawn
    log-uniformly inside ``cond_range``. Geometric mean is kept near 1."""
    lo, hi = cond_range
    cond = np.exp(rng.uniform(np.log(lo), np.log(hi)))
    if n == 1:
        return np.exp(rng.uniform(-0.5 * np.log(hi), 0.5 * np.log(hi), size=1))
    top = 0.5 * np.log(cond)
    vals = np.empty(n)
    vals[0] = top
    vals[1] = -top
    if n > 2:
        vals[2:] = rng.uniform(-top, top, size=n - 2)
    return np.exp(vals)


def _one_matrix(n, cond_range, field, stream):
    rng = np.random.default_rng(stream)
    lam = _spectrum_for(cond_range, n, rng)
    u = haar_unitary(n, rng, field)
    return validate_spd(hermitize((u * lam) @ u.conj().T))


def random_spd(config):
    """Draw ``config.m`` independent random SPD matrices.

    Each matrix is ``U diag(lam) U*`` with Haar ``U`` and log-uniform
    spectrum ``lam``; matrix ``j`` uses substream ``j`` of the master seed.
    With ``config.commuting`` the basis is shared instead (see
    :func:`random_commuting_spd`).

    Returns
    -------
    list of SpdMatrix
    """
    if config.commuting:
        return random_commuting_spd(config)
    streams = np.random.SeedSequence(config.seed).spawn(config.m)
    return [
        _one_matrix(config.n, config.cond_range, config.field, s) for s in streams
    ]


def random_commuting_spd(config):
    """Draw ``config.m`` random SPD matrices sharing one Haar eigenbasis.

    The shared basis makes the family exactly commuting (up to roundoff),
    which is the regime where the classical means all collapse to entrywise
    closed forms; useful as an exact regression ensemble.
    """
    streams = np.random.SeedSequence(config.seed).spawn(config.m + 1)
    rng_u = np.random.default_rng(streams[0])
    u = haar_unitary(config.n, rng_u, config.field)
    out = []
    for s in streams[1:]:
        rng = np.random.default_rng(s)
        lam = _spectrum_for(config.cond_range, config.n, rng)
        out.append(validate_spd(hermitize((u * lam) @ u.conj().T)))
    return out


def random_weights(m, seed):
    """Random weight vector on the simplex (Dirichlet(1,...,1) draw)."""
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    w = rng.dirichlet(np.ones(m))
    return w / w.sum()
