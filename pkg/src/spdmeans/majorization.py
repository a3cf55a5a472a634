"""Spectra and majorization relations with toleranced three-way verdicts.

Floating point cannot certify an exact inequality, so every check returns
``holds`` / ``violated`` / ``indeterminate`` against a tolerance band:
``holds`` when the worst slack clears ``+band``, ``violated`` below
``-band``, ``indeterminate`` in between. Exact-equality instances (e.g.
commuting families) deliberately land in the indeterminate zone rather
than being reported as a boolean lie.

The log relations compare prefix sums of logarithms, never raw products,
so ill-conditioned spectra up to dimension ~50 cannot overflow.
"""

from dataclasses import dataclass

import numpy as np

from .core import _as_matrix, hermitian_deviation
from .errors import ComplexSpectrumError, DomainError, LengthMismatchError

__all__ = [
    "HOLDS",
    "VIOLATED",
    "INDETERMINATE",
    "DEFAULT_BAND",
    "MajorizationVerdict",
    "spectrum",
    "weak_majorization",
    "weak_log_majorization",
    "log_majorization",
]

HOLDS = "holds"
VIOLATED = "violated"
INDETERMINATE = "indeterminate"

#: Default tolerance band, on the log scale for the log relations.
DEFAULT_BAND = 1e-9

SPECTRUM_IMAG_TOL = 1e-9


@dataclass(frozen=True)
class MajorizationVerdict:
    """Outcome of one majorization comparison.

    ``margin`` is the signed worst-case slack (positive means the relation
    holds with room to spare) and ``k_worst`` the 1-based prefix length at
    which it is attained.
    """

    relation: str
    status: str
    margin: float
    k_worst: int

    def to_json(self):
        return {
            "relation": self.relation,
            "status": self.status,
            "margin": self.margin,
            "k_worst": self.k_worst,
        }


def spectrum(a, imag_tol=SPECTRUM_IMAG_TOL):
    """Descending real spectrum of a matrix with real positive eigenvalues.

    Hermitian input goes through the symmetric eigensolver. Non-Hermitian
    input (products of positive definite matrices, their square roots) is
    accepted as long as the imaginary parts are below ``imag_tol`` times
    the spectral scale.
    """
    a = _as_matrix(a)
    if hermitian_deviation(a) <= 1e-12:
        vals = np.linalg.eigvalsh(a)
        return vals[::-1].copy()
    vals = np.linalg.eigvals(a)
    scale = float(np.max(np.abs(vals))) or 1.0
    worst = float(np.max(np.abs(vals.imag)))
    if worst > imag_tol * scale:
        raise ComplexSpectrumError(
            f"imaginary parts up to {worst:.3e} exceed {imag_tol:.1e} * {scale:.3e}"
        )
    return np.sort(vals.real)[::-1]


def _prepare(x, y, positive):
    x = np.sort(np.asarray(x, dtype=float))[::-1]
    y = np.sort(np.asarray(y, dtype=float))[::-1]
    if x.shape != y.shape or x.ndim != 1:
        raise LengthMismatchError(f"spectra of lengths {x.shape} vs {y.shape}")
    if positive and (x[-1] <= 0.0 or y[-1] <= 0.0):
        raise DomainError("log majorization needs strictly positive spectra")
    return x, y


def _status(margin, band):
    if margin >= band:
        return HOLDS
    if margin <= -band:
        return VIOLATED
    return INDETERMINATE


def weak_majorization(x, y, band=DEFAULT_BAND):
    """Check ``x prec_w y``: every prefix sum of x below that of y.

    Slacks are measured relative to ``sum(y)``.
    """
    x, y = _prepare(x, y, positive=False)
    scale = float(np.sum(y)) or 1.0
    slack = (np.cumsum(y) - np.cumsum(x)) / scale
    k = int(np.argmin(slack))
    margin = float(slack[k])
    return MajorizationVerdict("weak", _status(margin, band), margin, k + 1)


def weak_log_majorization(x, y, band=DEFAULT_BAND):
    """Check ``x prec_wlog y``: every prefix product of x below that of y,
    compared as prefix sums of logarithms."""
    x, y = _prepare(x, y, positive=True)
    slack = np.cumsum(np.log(y)) - np.cumsum(np.log(x))
    k = int(np.argmin(slack))
    margin = float(slack[k])
    return MajorizationVerdict("weak_log", _status(margin, band), margin, k + 1)


def log_majorization(x, y, band=DEFAULT_BAND):
    """Check ``x prec_log y``: weak log majorization plus equality of the
    full products.

    The equality part enters the margin as ``2*band - |gap|``, so the usual
    three-way rule applies unchanged: the full-product gap may use up to
    ``band`` before the verdict degrades, and beyond that the relation is
    violated outright (the products genuinely differ).
    """
    x, y = _prepare(x, y, positive=True)
    slack = np.cumsum(np.log(y)) - np.cumsum(np.log(x))
    gap = abs(float(slack[-1]))
    candidates = np.append(slack[:-1], 2.0 * band - gap)
    k = int(np.argmin(candidates))
    margin = float(candidates[k])
    return MajorizationVerdict("log", _status(margin, band), margin, k + 1)
