"""Validated positive definite matrices and Hermitian matrix functions.

All matrix functions go through the unitary eigendecomposition ``A = U diag(w) U*``
rather than Schur or Pade approaches; at the dimensions this package targets
(a few hundred at most) that is the simplest correct path, and it keeps every
result exactly Hermitian after resymmetrization.

Real symmetric input stays real throughout; complex Hermitian input stays
complex. Both are supported everywhere.
"""

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .errors import (
    DimensionMismatchError,
    DomainError,
    NotHermitianError,
    NotPositiveDefiniteError,
    ParameterError,
)

__all__ = [
    "SpdMatrix",
    "validate_spd",
    "hermitize",
    "hermitian_deviation",
    "frobenius",
    "hermfun",
    "sqrtm",
    "invsqrtm",
    "logm",
    "expm",
    "powm",
    "product_sqrt",
    "compound",
]

#: Default relative tolerance for accepting a matrix as Hermitian.
#: Inputs within it are symmetrized; beyond it they are rejected, so that
#: accumulating products cannot silently drift away from Hermitian.
HERM_TOL = 1e-10


def hermitize(a):
    """Return the Hermitian part ``(A + A*) / 2`` of a square matrix."""
    a = np.asarray(a)
    return 0.5 * (a + a.conj().T)


def hermitian_deviation(a):
    """Relative deviation of ``A`` from its conjugate transpose.

    Returns ``max|A - A*| / max|A|`` (0 for the zero matrix).
    """
    a = np.asarray(a)
    scale = np.max(np.abs(a))
    if scale == 0.0:
        return 0.0
    return float(np.max(np.abs(a - a.conj().T)) / scale)


def frobenius(a):
    """Frobenius norm of a matrix."""
    return float(np.linalg.norm(np.asarray(a), "fro"))


@dataclass(frozen=True, eq=False)
class SpdMatrix:
    """A validated Hermitian positive definite matrix.

    Instances are produced by :func:`validate_spd`; the stored array is
    symmetrized and write-protected, so a value can be shared across
    concurrent computations. ``np.asarray`` unwraps it.

    Attributes
    ----------
    mat : ndarray, shape (n, n)
        The validated entries. Real for real input, complex for complex.
    """

    mat: np.ndarray
    _spectrum: np.ndarray = field(default=None, repr=False, compare=False)

    @property
    def n(self):
        """Matrix dimension."""
        return self.mat.shape[0]

    @property
    def spectrum(self):
        """Eigenvalues sorted in descending order (computed once, cached)."""
        if self._spectrum is None:
            vals = np.linalg.eigvalsh(self.mat)[::-1].copy()
            vals.flags.writeable = False
            object.__setattr__(self, "_spectrum", vals)
        return self._spectrum

    def __array__(self, dtype=None, copy=None):
        if dtype is not None:
            return self.mat.astype(dtype)
        return self.mat


def validate_spd(raw, herm_tol=HERM_TOL):
    """Validate a raw array as Hermitian positive definite.

    Parameters
    ----------
    raw : array_like, shape (n, n)
        Candidate matrix, real or complex.
    herm_tol : float
        Relative bound on the allowed deviation from Hermitian symmetry.

    Returns
    -------
    SpdMatrix
        Wrapper around the symmetrized entries.

    Raises
    ------
    NotHermitianError
        If ``max|A - A*|`` exceeds ``herm_tol * max|A|``.
    NotPositiveDefiniteError
        If the smallest eigenvalue of the symmetrized matrix is not
        strictly positive. There is no epsilon floor: near-singular input
        is accepted as long as the computed spectrum stays positive.
    """
    a = np.asarray(raw)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got shape {a.shape}")
    dev = hermitian_deviation(a)
    if dev > herm_tol:
        raise NotHermitianError(
            f"asymmetry {dev:.3e} exceeds tolerance {herm_tol:.3e}"
        )
    h = hermitize(a)
    vals = np.linalg.eigvalsh(h)
    if vals[0] <= 0.0:
        raise NotPositiveDefiniteError(f"smallest eigenvalue {vals[0]:.6e} is not > 0")
    h.flags.writeable = False
    spectrum = vals[::-1].copy()
    spectrum.flags.writeable = False
    return SpdMatrix(h, spectrum)


def _as_matrix(a):
    """Unwrap :class:`SpdMatrix` or pass an ndarray through."""
    if isinstance(a, SpdMatrix):
        return a.mat
    return np.asarray(a)


def hermfun(a, f, domain=None):
    """Apply a scalar function to a Hermitian matrix through its eigenvalues.

    Computes ``U f(w) U*`` for ``A = U diag(w) U*`` and resymmetrizes the
    result.

    Parameters
    ----------
    a : array_like or SpdMatrix
        Hermitian matrix. It is symmetrized before decomposition.
    f : callable
        Function applied elementwise to the eigenvalues.
    domain : str, optional
        ``"positive"`` to require a strictly positive spectrum.

    Raises
    ------
    DomainError
        If ``domain="positive"`` and the smallest eigenvalue is not > 0.
    """
    a = hermitize(_as_matrix(a))
    w, u = np.linalg.eigh(a)
    if domain == "positive" and w[0] <= 0.0:
        raise DomainError(
            f"function requires a positive definite input; min eigenvalue {w[0]:.6e}"
        )
    return hermitize((u * f(w)) @ u.conj().T)


def sqrtm(a):
    """Principal square root of a positive definite matrix."""
    return hermfun(a, np.sqrt, domain="positive")


def invsqrtm(a):
    """Inverse square root of a positive definite matrix."""
    return hermfun(a, lambda w: 1.0 / np.sqrt(w), domain="positive")


def logm(a):
    """Matrix logarithm of a positive definite matrix."""
    return hermfun(a, np.log, domain="positive")


def expm(a):
    """Matrix exponential of a Hermitian matrix."""
    return hermfun(a, np.exp)


def powm(a, p):
    """Real matrix power ``A**p`` of a Hermitian matrix.

    Nonnegative integer powers accept any Hermitian input; every other
    exponent requires positive definiteness.
    """
    needs_pd = not (p >= 0 and float(p).is_integer())
    return hermfun(a, lambda w: w**p, domain="positive" if needs_pd else None)


def product_sqrt(a, b):
    """Square root of the product ``AB`` of two positive definite matrices.

    ``AB`` is similar to the positive definite ``A^(1/2) B A^(1/2)``, so it
    has a unique square root with positive eigenvalues. It is computed by
    congruence,

        ``(AB)^(1/2) = A^(1/2) (A^(1/2) B A^(1/2))^(1/2) A^(-1/2)``,

    which guarantees the positive-spectrum branch; a non-Hermitian square
    root iteration could land elsewhere.

    Returns
    -------
    ndarray
        A non-Hermitian matrix whose square is ``AB`` and whose spectrum is
        real and positive.
    """
    a = _as_matrix(a)
    b = _as_matrix(b)
    if a.shape != b.shape:
        raise DimensionMismatchError(f"shape mismatch: {a.shape} vs {b.shape}")
    rt = sqrtm(a)
    irt = invsqrtm(a)
    inner = sqrtm(rt @ b @ rt)
    return rt @ inner @ irt


def compound(a, k):
    """k-th compound (antisymmetric tensor power) of a square matrix.

    Entry ``(I, J)`` is the ``k x k`` minor of ``A`` with rows ``I`` and
    columns ``J``, where the k-subsets are ordered lexicographically. The
    map is multiplicative, and for positive definite ``A`` the top
    eigenvalue of the compound is the product of the ``k`` largest
    eigenvalues of ``A``.

    Parameters
    ----------
    a : array_like, shape (n, n)
    k : int
        Order, ``1 <= k <= n``.

    Returns
    -------
    ndarray, shape (C(n,k), C(n,k))
    """
    a = _as_matrix(a)
    n = a.shape[0]
    if not 1 <= k <= n:
        raise ParameterError(f"compound order k={k} outside 1..{n}")
    if k == 1:
        return a.copy()
    subsets = list(combinations(range(n), k))
    blocks = np.array(
        [[a[np.ix_(rows, cols)] for cols in subsets] for rows in subsets]
    )
    return np.linalg.det(blocks)
