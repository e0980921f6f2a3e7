"""Exception types shared across the package.

Negative mathematical verdicts (a kernel having no generator, a dichotomy
returning neither extension) are ordinary return values, not exceptions.
Exceptions are reserved for violated preconditions, ambiguous inputs the
code refuses to guess about, and impossible states that indicate a bug or
a tolerance failure.
"""


class CircleNoiseError(Exception):
    """Base class for all package errors."""


class NotPositiveDefinite(CircleNoiseError):
    """A covariogram produced a materially negative squared coefficient."""


class UnderResolved(CircleNoiseError):
    """Sampling grid too coarse for the requested spectral truncation."""


class AllZeroKernel(CircleNoiseError):
    """Every Fourier block of the kernel vanishes; the trivial case is
    excluded from the generator decision procedure."""


class BothSucceed(CircleNoiseError):
    """Both candidate extensions passed the generator check.  Theory rules
    this out, so it signals a tolerance failure and is never resolved
    silently."""


class PreconditionViolation(CircleNoiseError):
    """An operation's documented precondition does not hold for the input."""


class ClusterAmbiguity(CircleNoiseError):
    """Variance spacing falls in the gray zone between 'equal' and
    'distinct'; the caller must tighten cluster_tol or perturb the input."""


class InsufficientTail(CircleNoiseError):
    """Too few nonzero coefficients to fit a decay exponent."""


class DegeneratePath(CircleNoiseError):
    """A constant path has no defined Holder exponent."""


class FitError(CircleNoiseError):
    """Likelihood or root-finding failure."""


class LengthMismatch(CircleNoiseError):
    """Sample count does not match the declared frequency count."""


class AllZeroEnergies(CircleNoiseError):
    """Every per-frequency energy is zero; amplitude is not identifiable."""


class NoRoot(FitError):
    """The score has no sign change in the (widened) search interval."""


class NotConverged(FitError):
    """Root polishing left a score residual above tolerance."""


class ConfigError(CircleNoiseError):
    """Invalid command-line or config-file input."""
