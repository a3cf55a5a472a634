"""Distances on the positive definite cone.

Four metrics, each the one whose barycenter problem induces a classical
mean: Bures-Wasserstein (Wasserstein mean), Cartan (geometric mean),
log-Euclidean (log-Euclidean mean), and Hellinger (square-root mean).
The only matrix norm used here is Frobenius.
"""

import numpy as np

from .core import _as_matrix, frobenius, invsqrtm, logm, sqrtm
from .errors import DimensionMismatchError, NegativeBracketError

__all__ = [
    "bures_wasserstein_distance",
    "cartan_distance",
    "log_euclidean_distance",
    "hellinger_distance",
    "METRICS",
]

#: Brackets under an outer square root may dip this far (relative to the
#: trace scale) below zero before we treat them as corrupted input rather
#: than roundoff.
BRACKET_CLAMP = 1e-12


def _pair(a, b):
    a = _as_matrix(a)
    b = _as_matrix(b)
    if a.shape != b.shape:
        raise DimensionMismatchError(f"shape mismatch: {a.shape} vs {b.shape}")
    return a, b


def _clamped_sqrt(bracket, scale, what):
    window = BRACKET_CLAMP * max(1.0, scale)
    if bracket < -window:
        raise NegativeBracketError(
            f"{what} bracket {bracket:.3e} below clamp {-window:.3e}; "
            "upstream input is likely not positive definite"
        )
    # A bracket inside the roundoff window is a zero distance, not a
    # distance of sqrt(roundoff); the square root would amplify the noise.
    if bracket <= window:
        return 0.0
    return float(np.sqrt(bracket))


def bures_wasserstein_distance(a, b):
    """Bures-Wasserstein distance between positive definite matrices.

        d(A, B) = [tr(A + B) - 2 tr (A^(1/2) B A^(1/2))^(1/2)]^(1/2)

    This is the optimal-transport distance between centered Gaussians with
    covariances A and B. The bracket is clamped at zero when it is within
    roundoff of it; a genuinely negative bracket raises.
    """
    a, b = _pair(a, b)
    rt = sqrtm(a)
    cross = rt @ b @ rt
    ev = np.clip(np.linalg.eigvalsh(0.5 * (cross + cross.conj().T)), 0.0, None)
    trace = float(np.trace(a).real + np.trace(b).real)
    bracket = trace - 2.0 * float(np.sum(np.sqrt(ev)))
    return _clamped_sqrt(bracket, trace, "Bures-Wasserstein")


def cartan_distance(a, b):
    """Cartan (affine-invariant) distance ``|| log A^(-1/2) B A^(-1/2) ||_F``.

    Invariant under congruence ``A -> X* A X`` by any invertible ``X``, not
    just unitaries.
    """
    a, b = _pair(a, b)
    irt = invsqrtm(a)
    return frobenius(logm(irt @ b @ irt))


def log_euclidean_distance(a, b):
    """Log-Euclidean distance ``|| log A - log B ||_F``."""
    a, b = _pair(a, b)
    return frobenius(logm(a) - logm(b))


def hellinger_distance(a, b):
    """Hellinger distance ``|| A^(1/2) - B^(1/2) ||_F`` between positive
    definite matrices.

    Also evaluated through the trace form
    ``[tr(A + B) - 2 tr A^(1/2) B^(1/2)]^(1/2)``; the two routes are
    cross-checked against each other and the direct norm is returned.
    """
    a, b = _pair(a, b)
    ra = sqrtm(a)
    rb = sqrtm(b)
    direct = frobenius(ra - rb)
    trace = float(np.trace(a).real + np.trace(b).real)
    bracket = trace - 2.0 * float(np.trace(ra @ rb).real)
    _clamped_sqrt(bracket, trace, "Hellinger")
    # Cross-check the two routes on the squared distance, where both carry
    # plain roundoff; the distances themselves lose half the digits near 0.
    if abs(direct**2 - bracket) > 1e-10 * max(1.0, trace):
        raise NegativeBracketError(
            f"Hellinger route mismatch: direct^2 {direct**2:.15e} vs "
            f"bracket {bracket:.15e}"
        )
    return direct


METRICS = {
    "bures_wasserstein": bures_wasserstein_distance,
    "cartan": cartan_distance,
    "log_euclidean": log_euclidean_distance,
    "hellinger": hellinger_distance,
}
