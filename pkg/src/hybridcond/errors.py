"""Exception types raised by hybridcond.

Everything derives from :class:`HybridCondError` so callers can catch the
package's failures with one clause; most types also inherit ``ValueError``
because they signal bad arguments rather than runtime faults.
"""


class HybridCondError(Exception):
    """Base class for all hybridcond errors."""


class NonPositiveLengthScale(HybridCondError, ValueError):
    """Correlation length scale must be strictly positive."""


class NonPositiveVariance(HybridCondError, ValueError):
    """Error variances must be strictly positive."""


class NotPositiveSemidefinite(HybridCondError, ValueError):
    """Matrix has an eigenvalue below the PSD tolerance."""


class NotSymmetric(HybridCondError, ValueError):
    """Matrix is not symmetric within tolerance."""


class NotPSD(NotPositiveSemidefinite):
    """Alias used by the product-inequality check."""


class EnsembleTooSmall(HybridCondError, ValueError):
    """Ensemble size m must be at least 2."""


class EnsembleTooLarge(HybridCondError, ValueError):
    """Ensemble size m must be smaller than the state dimension n."""


class WeightOutOfRange(HybridCondError, ValueError):
    """Hybrid weight beta must lie in [0, 1]."""


class TooManyObservations(HybridCondError, ValueError):
    """Observation count p exceeds the state dimension n."""


class IncompatibleObservationCount(HybridCondError, ValueError):
    """p must divide n for the strided observation operators."""


class DimensionMismatch(HybridCondError, ValueError):
    """Operands have incompatible shapes."""


class NearSingularBackground(HybridCondError, ArithmeticError):
    """Hybrid background covariance is numerically singular (beta -> 1 regime)."""


class IndefiniteDetected(HybridCondError, ArithmeticError):
    """CG encountered a direction of non-positive curvature."""


class DegenerateInputs(HybridCondError, ValueError):
    """Both eigenvalue inputs are zero; the switch point is undefined."""


class ConfigParseError(HybridCondError, ValueError):
    """Experiment configuration file or overrides could not be parsed."""


class UnknownFigure(HybridCondError, ValueError):
    """Requested figure preset does not exist."""
