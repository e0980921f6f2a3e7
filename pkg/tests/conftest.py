import numpy as np
import pytest

from circlenoise import (
    SpectralSequence,
    condition_at_zero,
    covariogram_from_coeffs,
)


def random_spectrum(rng, K=8, L=1.0, zero_c0=False):
    c = rng.uniform(0.1, 2.0, size=K + 1)
    if zero_c0:
        c[0] = 0.0
    return SpectralSequence(c, domain_length=L)


def conditioned_kernel(seq):
    return condition_at_zero(covariogram_from_coeffs(seq))


@pytest.fixture
def rng():
    return np.random.default_rng(20260819)
