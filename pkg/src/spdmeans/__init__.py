"""Means of positive definite matrices, the metrics that induce them, and
an executable catalog of the inequalities relating them.

The package has five layers:

* :mod:`spdmeans.core` - validated SPD matrices, Hermitian matrix
  functions, product square roots, compound matrices.
* :mod:`spdmeans.metrics` - Bures-Wasserstein, Cartan, log-Euclidean, and
  Hellinger distances.
* :mod:`spdmeans.means` - closed-form and fixed-point means (arithmetic,
  harmonic, log-Euclidean, power, Cartan, Wasserstein, power-type).
* :mod:`spdmeans.majorization` - spectra and toleranced majorization
  verdicts.
* :mod:`spdmeans.verify` - named checks for every inequality, suite
  runner with reproducible reports, counterexample search.
"""

__version__ = "0.1.0"

from .core import (
    SpdMatrix,
    compound,
    expm,
    frobenius,
    hermitize,
    invsqrtm,
    logm,
    powm,
    product_sqrt,
    sqrtm,
    validate_spd,
)
from .ensembles import (
    EnsembleConfig,
    haar_unitary,
    random_commuting_spd,
    random_spd,
    random_weights,
)
from .errors import (
    ComplexSpectrumError,
    DimensionMismatchError,
    DomainError,
    IncompatibleInstanceError,
    LengthMismatchError,
    NegativeBracketError,
    NotHermitianError,
    NotPositiveDefiniteError,
    ParameterError,
    SpdMeansError,
    ZeroExponentError,
)
from .majorization import (
    MajorizationVerdict,
    log_majorization,
    spectrum,
    weak_log_majorization,
    weak_majorization,
)
from .means import (
    MeanProblem,
    SolverConfig,
    SolverResult,
    arithmetic_mean,
    cartan_mean,
    geometric_geodesic,
    harmonic_mean,
    lim_palfia_mean,
    log_euclidean_mean,
    power_mean,
    pt_limit_probe,
    wasserstein_barycenter,
    wasserstein_geodesic,
)
from .metrics import (
    METRICS,
    bures_wasserstein_distance,
    cartan_distance,
    hellinger_distance,
    log_euclidean_distance,
)
from .checks import CHECKS, CheckResult, run_check
from .verify import SUITES, Report, run_suite, search_counterexamples

__all__ = [
    "__version__",
    "SpdMatrix", "validate_spd", "hermitize", "frobenius",
    "sqrtm", "invsqrtm", "logm", "expm", "powm", "product_sqrt", "compound",
    "EnsembleConfig", "haar_unitary", "random_spd", "random_commuting_spd",
    "random_weights",
    "SpdMeansError", "NotHermitianError", "NotPositiveDefiniteError",
    "DomainError", "DimensionMismatchError", "NegativeBracketError",
    "ZeroExponentError", "ParameterError", "ComplexSpectrumError",
    "LengthMismatchError", "IncompatibleInstanceError",
    "bures_wasserstein_distance", "cartan_distance",
    "log_euclidean_distance", "hellinger_distance", "METRICS",
    "MeanProblem", "SolverConfig", "SolverResult",
    "arithmetic_mean", "harmonic_mean", "log_euclidean_mean", "power_mean",
    "geometric_geodesic", "wasserstein_geodesic",
    "cartan_mean", "wasserstein_barycenter", "lim_palfia_mean",
    "pt_limit_probe",
    "spectrum", "MajorizationVerdict",
    "weak_majorization", "weak_log_majorization", "log_majorization",
    "CHECKS", "CheckResult", "run_check",
    "SUITES", "Report", "run_suite", "search_counterexamples",
]
