"""Generator existence decisions, inversion, and the reflection dichotomy."""

import numpy as np
import pytest

from circlenoise import (
    AllZeroKernel,
    CovarianceKernel,
    PreconditionViolation,
    SpectralSequence,
    brownian_bridge_generator,
    brownian_bridge_kernel,
    check_generator,
    condition_at_zero,
    covariogram_from_coeffs,
    extension_dichotomy,
    fourier_matrices,
)

from conftest import conditioned_kernel, random_spectrum


def test_sine_product_kernel_has_unique_generator():
    R = CovarianceKernel(
        lambda s, t: np.sin(2.0 * np.pi * np.asarray(s)) * np.sin(2.0 * np.pi * np.asarray(t)),
        1.0,
        "conditioned",
    )
    verdict = check_generator(fourier_matrices(R, K=4, M=1024))
    assert verdict.decision == "unique"
    want = np.zeros(5)
    want[1] = 2.0**-0.5
    np.testing.assert_allclose(verdict.spectrum.coeffs, want, atol=1e-7)
    assert verdict.total_variance == pytest.approx(1.0, abs=1e-9)
    np.testing.assert_allclose(verdict.proportions, [0.0, 1.0, 0.0, 0.0, 0.0], atol=1e-9)


def test_round_trip_recovers_spectrum(rng):
    for zero_c0 in (False, True):
        seq = random_spectrum(rng, K=8, L=1.0, zero_c0=zero_c0)
        verdict = check_generator(fourier_matrices(conditioned_kernel(seq), K=8))
        assert verdict.decision == "unique"
        scale = seq.coeffs.max()
        np.testing.assert_allclose(
            verdict.spectrum.coeffs, seq.coeffs, atol=1e-6 * scale, rtol=1e-6
        )
        assert verdict.total_variance == pytest.approx(seq.total_variance(), rel=1e-9)
        assert verdict.proportions.sum() == pytest.approx(1.0, abs=1e-12)


def test_bridge_rejected_at_every_quadrature_size():
    bridge = brownian_bridge_kernel()
    for M in (512, 1024, 2048):
        verdict = check_generator(fourier_matrices(bridge, K=10, M=M))
        assert verdict.decision == "no-generator"
        assert verdict.reasons == ("rbar-bound",)


def test_bridge_blocks_match_classical_eigenvalues():
    mats = fourier_matrices(brownian_bridge_kernel(), K=10, M=2048)
    k = np.arange(1, 11, dtype=float)
    classical = 1.0 / (2.0 * k * np.pi) ** 2
    np.testing.assert_allclose(np.diag(mats.rss), classical, atol=1e-6)
    np.testing.assert_allclose(np.diag(mats.rcc)[1:], classical, atol=1e-6)
    assert mats.rcc[0, 0] == pytest.approx(1.0 / 12.0, abs=1e-6)


def test_stationary_kernel_is_not_a_conditioned_one(rng):
    seq = random_spectrum(rng, K=4)
    cov = covariogram_from_coeffs(seq)
    pretender = CovarianceKernel(lambda s, t: cov.pair(s, t), 1.0, "conditioned")
    verdict = check_generator(fourier_matrices(pretender, K=4))
    assert verdict.decision == "no-generator"


def test_asymmetric_perturbation_fails_shape_conditions(rng):
    base = conditioned_kernel(random_spectrum(rng, K=4))

    def R(s, t):
        bump = 0.1 * np.sin(2 * np.pi * np.asarray(s)) * np.sin(4 * np.pi * np.asarray(t))
        return base.evaluate(s, t) + bump

    verdict = check_generator(fourier_matrices(CovarianceKernel(R, 1.0, "conditioned"), K=4))
    assert verdict.decision == "no-generator"
    assert verdict.reasons[0] in ("mixed", "ss-shape")


def test_cosine_block_perturbation_fails_reconstruction(rng):
    base = conditioned_kernel(random_spectrum(rng, K=4))

    def R(s, t):
        s, t = np.asarray(s), np.asarray(t)
        bump = np.cos(2 * np.pi * s) * np.cos(4 * np.pi * t)
        return base.evaluate(s, t) + 0.05 * (bump + np.cos(2 * np.pi * t) * np.cos(4 * np.pi * s))

    verdict = check_generator(fourier_matrices(CovarianceKernel(R, 1.0, "conditioned"), K=4))
    assert verdict.decision == "no-generator"
    assert "cc-reconstruction" in verdict.reasons


def test_zero_kernel_raises():
    zero = CovarianceKernel(lambda s, t: np.zeros(np.broadcast(s, t).shape), 1.0, "conditioned")
    with pytest.raises(AllZeroKernel):
        check_generator(fourier_matrices(zero, K=3, M=256))


def test_bridge_extension_is_antiperiodic():
    ext = extension_dichotomy(brownian_bridge_kernel(), K=13, M=1024)
    assert ext.kind == "antiperiodic"
    ideal = brownian_bridge_generator(K=6).coeffs
    np.testing.assert_allclose(ext.spectrum.coeffs[: ideal.size], ideal, atol=1e-4)
    assert ext.verdicts["periodic"].decision == "no-generator"
    # fitted variance sees past the truncation to the full bridge variance
    assert ext.verdicts["antiperiodic"].total_variance == pytest.approx(0.25, abs=1e-6)


def test_periodic_process_extends_periodically(rng):
    seq = random_spectrum(rng, K=2, L=1.0)
    ext = extension_dichotomy(conditioned_kernel(seq), K=8, M=1024)
    assert ext.kind == "periodic"
    # frequencies double when the circle doubles, amplitudes follow L
    want = np.zeros(9)
    want[0] = 2.0 * seq.coeffs[0]
    want[2] = 2.0 * seq.coeffs[1]
    want[4] = 2.0 * seq.coeffs[2]
    np.testing.assert_allclose(ext.spectrum.coeffs, want, atol=1e-6)
    assert ext.spectrum.domain_length == 2.0


def test_antiperiodic_process_extends_antiperiodically():
    seq = SpectralSequence([0.0, 1.0, 0.0, 0.4], domain_length=2.0)
    half = condition_at_zero(covariogram_from_coeffs(seq))
    restricted = CovarianceKernel(lambda s, t: half.pair(s, t), 1.0, "conditioned")
    ext = extension_dichotomy(restricted, K=8, M=1024)
    assert ext.kind == "antiperiodic"
    np.testing.assert_allclose(ext.spectrum.coeffs[:4], seq.coeffs, atol=1e-6)


def test_trivial_kernel_extends_to_nothing():
    zero = CovarianceKernel(lambda s, t: np.zeros(np.broadcast(s, t).shape), 1.0, "conditioned")
    ext = extension_dichotomy(zero, K=4, M=256)
    assert ext.kind == "none"
    assert ext.spectrum is None


def test_extension_requires_vanishing_boundary(rng):
    seq = random_spectrum(rng, K=3)
    cov = covariogram_from_coeffs(seq)
    pretender = CovarianceKernel(lambda s, t: cov.pair(s, t), 1.0, "conditioned")
    with pytest.raises(PreconditionViolation):
        extension_dichotomy(pretender, K=4, M=256)


def test_extension_requires_conditioned_kind(rng):
    cov = covariogram_from_coeffs(random_spectrum(rng, K=3))
    with pytest.raises(PreconditionViolation):
        extension_dichotomy(cov, K=4, M=256)
