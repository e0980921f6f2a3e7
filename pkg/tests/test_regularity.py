"""Holder regularity predicted from coefficient decay and measured from paths."""

import numpy as np
import pytest

from circlenoise import (
    DegeneratePath,
    InsufficientTail,
    SpectralSequence,
    brownian_bridge_generator,
    covariogram_from_coeffs,
    default_lags,
    empirical_holder,
    predict_regularity,
    sample_H,
    sample_H0,
    structure_function,
    theoretical_structure,
)


def power_law(p, K=256, a=1.0, L=1.0):
    c = np.zeros(K + 1)
    c[1:] = a / np.arange(1, K + 1, dtype=float) ** p
    return SpectralSequence(c, domain_length=L)


def test_exact_power_decay_is_recovered():
    rep = predict_regularity(power_law(1.0))
    assert rep.decay_exponent == pytest.approx(2.0, abs=1e-8)
    assert rep.smoothness_order == 0
    assert rep.alpha == pytest.approx(1.0)
    assert rep.beta_sup == pytest.approx(0.5)

    rep = predict_regularity(power_law(2.0))
    assert rep.decay_exponent == pytest.approx(4.0, abs=1e-8)
    assert rep.smoothness_order == 1
    assert rep.alpha == pytest.approx(1.0)


def test_predicted_beta_matches_power_exponent():
    # for 1/2 < p <= 1 the sup-Holder bound is p - 1/2, increasing in p
    betas = [predict_regularity(power_law(p)).beta_sup for p in (0.6, 0.75, 0.9, 1.0)]
    np.testing.assert_allclose(betas, [0.1, 0.25, 0.4, 0.5], atol=1e-8)
    assert all(b1 < b2 for b1, b2 in zip(betas, betas[1:]))


def test_slow_decay_gives_no_guarantee():
    rep = predict_regularity(power_law(0.4))
    assert np.isnan(rep.alpha)
    assert rep.beta_sup == 0.0
    assert any("too slow" in w for w in rep.warnings)


def test_fast_decay_alpha_clamped():
    rep = predict_regularity(power_law(1.25))
    assert rep.alpha == pytest.approx(1.0)
    assert any("clamp" in w for w in rep.warnings)


def test_bridge_generator_predicts_half_holder():
    rep = predict_regularity(brownian_bridge_generator(K=256))
    assert rep.decay_exponent == pytest.approx(2.0, abs=1e-6)
    assert rep.beta_sup == pytest.approx(0.5, abs=1e-6)


def test_short_tail_rejected():
    with pytest.raises(InsufficientTail):
        predict_regularity(SpectralSequence([1.0, 0.5, 0.2, 0.1], domain_length=1.0))


def test_default_lag_grid():
    assert default_lags(8192) == [8, 16, 32, 64, 128, 256, 512]
    assert default_lags(2048) == [8, 16, 32, 64, 128]


def test_structure_function_matches_covariogram():
    seq = SpectralSequence(
        np.concatenate([[0.5], 1.0 / np.arange(1, 17, dtype=float)]), domain_length=1.0
    )
    lags = [4, 8, 16, 32]
    seeds = range(12)
    rows = []
    for seed in seeds:
        path = sample_H(seq, N=2048, seed=seed)
        hs, sf = structure_function(path, lags)
        rows.append(sf)
    rows = np.array(rows)
    want = theoretical_structure(covariogram_from_coeffs(seq), hs)
    mean = rows.mean(axis=0)
    se = rows.std(axis=0, ddof=1) / np.sqrt(len(rows))
    assert np.all(np.abs(mean - want) < 3.0 * se)


def test_structure_function_wraps_around():
    seq = SpectralSequence([0.0, 1.0], domain_length=1.0)
    path = sample_H(seq, N=64, seed=5)
    hs, sf = structure_function(path, [16])
    x = path.values
    want = np.mean((np.roll(x, -16) - x) ** 2)
    assert sf[0] == pytest.approx(want, rel=1e-12)
    assert hs[0] == pytest.approx(16 / 64)


def test_bridge_paths_estimate_half_holder():
    seq = brownian_bridge_generator(K=2047)
    ests = [empirical_holder(sample_H0(seq, N=8192, seed=s)) for s in range(10)]
    assert 0.4 < np.mean(ests) < 0.6


def test_holder_estimates_increase_with_p():
    for seed in range(5):
        ests = [
            empirical_holder(sample_H(power_law(p, K=2047), N=8192, seed=seed))
            for p in (0.75, 1.0, 1.25)
        ]
        assert ests[0] < ests[1] < ests[2]


def test_smooth_power_path_estimate_near_one():
    # p = 1.5 sits at the differentiability edge; short lags avoid the
    # logarithmic correction that drags the slope down at long ones
    ests = [
        empirical_holder(sample_H(power_law(1.5, K=2047), N=8192, seed=s), lags=[4, 8, 16, 32, 64])
        for s in range(8)
    ]
    assert 0.9 < np.mean(ests) < 1.1


def test_constant_path_rejected():
    seq = SpectralSequence([1.0], domain_length=1.0)
    path = sample_H(seq, N=2048, seed=0)
    with pytest.raises(DegeneratePath):
        empirical_holder(path)


def test_short_path_rejected():
    seq = SpectralSequence([0.0, 1.0, 0.5, 0.2], domain_length=1.0)
    path = sample_H(seq, N=512, seed=0)
    with pytest.raises(Exception):
        empirical_holder(path)
