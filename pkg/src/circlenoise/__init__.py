"""Gaussian stationary periodic processes on the circle: spectral
synthesis, conditioning at a point, generator existence and recovery,
conditioned spectra, regularity prediction, and power-law ML fitting."""

__version__ = "0.1.0"

from .errors import (
    AllZeroEnergies,
    AllZeroKernel,
    BothSucceed,
    CircleNoiseError,
    ClusterAmbiguity,
    ConfigError,
    DegeneratePath,
    FitError,
    InsufficientTail,
    LengthMismatch,
    NoRoot,
    NotConverged,
    NotPositiveDefinite,
    PreconditionViolation,
    UnderResolved,
)
from .generator import (
    ExtensionResult,
    GeneratorVerdict,
    brownian_bridge_generator,
    brownian_bridge_kernel,
    check_generator,
    extension_dichotomy,
)
from .mle import (
    FisherAsymptotics,
    FitResult,
    FrequencyEnergies,
    PowerLawModel,
    asymptotics,
    energies,
    fit_joint,
    fit_known_a,
    fit_known_p,
    loglik,
    sample_model,
    score,
)
from .regularity import (
    RegularityReport,
    default_lags,
    empirical_holder,
    predict_regularity,
    structure_function,
    theoretical_structure,
)
from .spectral import (
    CovarianceKernel,
    FourierMatrices,
    SpectralSequence,
    coeffs_from_covariogram,
    condition_at_zero,
    covariogram_from_coeffs,
    fourier_matrices,
)
from .spectrum import (
    EigenSystem,
    InterlacingReport,
    conditioned_spectrum,
    operator_oracle,
    secular_value,
    verify_interlacing,
)
from .synthesis import (
    GaussianDraw,
    Periodicity,
    SamplePath,
    classify_periodicity,
    draw_coefficients,
    rng_from_seed,
    sample_H,
    sample_H0,
)

__all__ = [name for name in dir() if not name.startswith("_")]
