"""Path regularity: predicted from coefficient decay, estimated from data.

For a stationary sequence with c_k^2 = O(k^{-(1 + 2m + alpha)}),
alpha in (0, 1], trajectories have a modification in C^{m, beta} for every
beta < alpha / 2.  Given a fitted decay exponent d of c_k^2, the largest
guaranteed class takes s = d - 1, m = floor(s / 2) and alpha = s - 2m,
with two boundary conventions applied conservatively: alpha = 0 falls
back to (m - 1, alpha = 1), and alpha in (1, 2) is clamped to 1.  Both
yield strictly weaker (hence sound) guarantees than the fitted decay.

The empirical route estimates a Holder exponent from the structure
function h -> mean |x_{t+h} - x_t|^2, whose log-log slope is twice the
exponent.  For stationary paths the structure function has the exact
closed form 2 (C(0) - C(h)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegeneratePath, InsufficientTail, PreconditionViolation
from .spectral import CovarianceKernel, SpectralSequence
from .synthesis import SamplePath


@dataclass(frozen=True)
class RegularityReport:
    """Predicted smoothness class C^{m, beta} for all beta < beta_sup.

    decay_exponent is the fitted d with c_k^2 ~ k^{-d}; alpha in (0, 1]
    and smoothness_order m decompose d = 1 + 2m + alpha; beta_sup is the
    open Holder bound alpha / 2.  confidence carries the fit window and
    R^2; warnings flag weak fits and boundary conventions.
    """

    decay_exponent: float
    alpha: float
    smoothness_order: int
    beta_sup: float
    confidence: dict
    warnings: tuple[str, ...] = ()


def predict_regularity(seq: SpectralSequence) -> RegularityReport:
    """Fit the coefficient decay and map it to a smoothness class.

    Uses least squares on log c_k^2 against log k over the upper half of
    the nonzero frequency range, where the decay is asymptotic rather
    than pre-asymptotic.  Requires at least 8 nonzero coefficients.
    """
    freqs = seq.support()
    if freqs.size < 8:
        raise InsufficientTail(f"need at least 8 nonzero coefficients, got {freqs.size}")

    k_lo, k_hi = int(freqs[0]), int(freqs[-1])
    window = freqs[freqs >= 0.5 * (k_lo + k_hi)]
    if window.size < 4:
        window = freqs[freqs.size // 2 :]

    x = np.log(window.astype(float))
    y = np.log(seq.coeffs[window] ** 2)
    slope, intercept = np.polyfit(x, y, 1)
    fitted = slope * x + intercept
    ss_res = float(np.sum((y - fitted) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r_squared = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot

    warnings: list[str] = []
    if r_squared < 0.9:
        warnings.append("non-monotone-tail: decay fit R^2 below 0.9")

    d = -float(slope)
    if d <= 1.0:
        warnings.append("decay too slow for any Holder guarantee")
        m, alpha, beta_sup = 0, float("nan"), 0.0
    else:
        s = d - 1.0
        m = math.floor(s / 2.0)
        alpha = s - 2.0 * m
        if alpha <= 1e-6:
            # Integer boundary: retreat to the closed end of the weaker class.
            # The band (not exact equality) matters: a fitted d of 3 +- 1e-12
            # would otherwise flip beta between 0.5 and 0 on round-off.
            m -= 1
            alpha = 1.0
            warnings.append("integer decay boundary: reported class is the conservative side")
        elif alpha > 1.0:
            alpha = 1.0
            warnings.append("alpha clamped to 1; true class may be smoother")
        beta_sup = alpha / 2.0

    return RegularityReport(
        decay_exponent=d,
        alpha=alpha,
        smoothness_order=m,
        beta_sup=beta_sup,
        confidence={
            "r_squared": r_squared,
            "window": (int(window[0]), int(window[-1])),
            "n_points": int(window.size),
        },
        warnings=tuple(warnings),
    )


def default_lags(n: int) -> list[int]:
    """Dyadic lags 8, 16, ... up to n // 16."""
    lags = []
    lag = 8
    while lag <= n // 16 and lag <= 512:
        lags.append(lag)
        lag *= 2
    return lags


def structure_function(path: SamplePath, lags: list[int]) -> tuple[np.ndarray, np.ndarray]:
    """Mean squared increments over wraparound lags.

    Returns (time lags, mean |x_{t+h} - x_t|^2).  The path is treated as
    periodic, so increments wrap around the circle.
    """
    v = path.values
    n = v.size
    for lag in lags:
        if not (0 < lag < n):
            raise PreconditionViolation(f"lag {lag} outside the grid of {n} points")
    sf = np.array([float(np.mean((np.roll(v, -lag) - v) ** 2)) for lag in lags])
    hs = np.asarray(lags, dtype=float) * path.t_step
    return hs, sf


def theoretical_structure(kernel: CovarianceKernel, hs) -> np.ndarray:
    """Exact stationary structure function 2 (C(0) - C(h))."""
    C = kernel.covariogram
    h = np.asarray(hs, dtype=float)
    return 2.0 * (float(C(0.0)) - np.asarray(C(h), dtype=float))


def empirical_holder(path: SamplePath, lags: list[int] | None = None) -> float:
    """Estimate a Holder exponent from one path's structure function.

    Fits the log-log slope of the structure function over dyadic lags and
    halves it.  Requires at least 1024 samples; constant paths have no
    defined exponent.
    """
    n = len(path)
    if n < 1024:
        raise PreconditionViolation(f"need at least 1024 samples, got {n}")
    if lags is None:
        lags = default_lags(n)
    if np.ptp(path.values) == 0.0:
        raise DegeneratePath("constant path has no Holder exponent")

    hs, sf = structure_function(path, lags)
    if np.any(sf <= 0.0):
        raise DegeneratePath("structure function vanishes at some lag")
    slope = np.polyfit(np.log(hs), np.log(sf), 1)[0]
    return float(slope / 2.0)
