"""Reconstruction quality metrics: PSNR, SSIM, normalized cross-correlation.

All metrics compare against target intensities in [0, 1] with a fixed
dynamic range of 1.0; reconstructed intensities are accepted raw (they may
exceed 1 under the unit-amplitude SLM constraint and are deliberately not
rescaled).  PSNR carries a small epsilon in the MSE denominator so
identical images produce a finite, square-integrable score.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.ndimage import correlate1d

from .exceptions import DegenerateInputError
from .validation import check_intensity, check_same_shape

PSNR_EPS = 1e-12

METRIC_NAMES = ("psnr", "ssim", "accuracy")

_SSIM_WINDOW = 11
_SSIM_SIGMA = 1.5
_SSIM_K1 = 0.01
_SSIM_K2 = 0.03


@dataclass(frozen=True)
class MetricRecord:
    psnr_db: float
    ssim: float
    accuracy: float


def psnr(recon, target, eps: float = PSNR_EPS) -> float:
    """Peak signal-to-noise ratio in dB: 10*log10(1 / (MSE + eps))."""
    a = check_intensity(recon, "recon")
    b = check_intensity(target, "target")
    check_same_shape(a, b)
    mse = float(np.mean((a - b) ** 2))
    return 10.0 * np.log10(1.0 / (mse + eps))


def _gaussian_window() -> np.ndarray:
    half = (_SSIM_WINDOW - 1) / 2.0
    x = np.arange(_SSIM_WINDOW) - half
    g = np.exp(-(x**2) / (2.0 * _SSIM_SIGMA**2))
    return g / g.sum()


_SSIM_KERNEL = _gaussian_window()


def _local_mean(stack: np.ndarray) -> np.ndarray:
    # separable Gaussian correlation over the trailing two axes; the
    # interior slice equals fully-valid sliding windows
    half = _SSIM_WINDOW // 2
    t = correlate1d(stack, _SSIM_KERNEL, axis=-2, mode="constant")
    t = correlate1d(t, _SSIM_KERNEL, axis=-1, mode="constant")
    return t[..., half:-half, half:-half]


class SsimReference:
    """Target-side SSIM state reused across many reconstructions.

    Precomputes the target's local mean and variance maps once; scoring a
    reconstruction then needs only the three reconstruction-side maps.
    """

    def __init__(self, target):
        self.target = check_intensity(target, "target")
        if min(self.target.shape) < _SSIM_WINDOW:
            raise ValueError(
                f"images must be at least {_SSIM_WINDOW} pixels per side, got {self.target.shape}"
            )
        self.mu = _local_mean(self.target)
        self.var = _local_mean(self.target * self.target) - self.mu**2

    def score(self, recon) -> float:
        a = check_intensity(recon, "recon")
        check_same_shape(a, self.target)
        c1 = (_SSIM_K1 * 1.0) ** 2  # dynamic range fixed at 1.0
        c2 = (_SSIM_K2 * 1.0) ** 2
        maps = _local_mean(np.stack([a, a * a, a * self.target]))
        mu_a = maps[0]
        var_a = maps[1] - mu_a**2
        cov = maps[2] - mu_a * self.mu
        score = ((2.0 * mu_a * self.mu + c1) * (2.0 * cov + c2)) / (
            (mu_a**2 + self.mu**2 + c1) * (var_a + self.var + c2)
        )
        return float(np.mean(score))


def ssim(recon, target) -> float:
    """Mean local structural similarity.

    Uses the standard configuration: 11x11 Gaussian window with sigma 1.5,
    K1 = 0.01, K2 = 0.03, dynamic range 1.0.  Local statistics are taken
    over fully interior windows and the SSIM map is averaged.
    """
    return SsimReference(target).score(recon)


def accuracy(recon, target) -> float:
    """Normalized cross-correlation of intensities, in [0, 1] for
    nonnegative images; 1.0 iff the images are proportional."""
    a = check_intensity(recon, "recon")
    b = check_intensity(target, "target")
    check_same_shape(a, b)
    denom_a = float(np.sum(a * a))
    denom_b = float(np.sum(b * b))
    if denom_a == 0.0 or denom_b == 0.0:
        raise DegenerateInputError("accuracy is undefined for an identically zero image")
    return float(np.sum(a * b) / np.sqrt(denom_a * denom_b))


def metric_record(recon, target) -> MetricRecord:
    return MetricRecord(psnr(recon, target), ssim(recon, target), accuracy(recon, target))


def minmax_normalize(scores) -> np.ndarray:
    """Affinely map scores onto [0, 1]; a degenerate (constant) input maps
    to all 0.5 so downstream ratio metrics are not biased toward zero."""
    arr = np.asarray(scores, dtype=np.float64)
    if arr.size == 0:
        raise ValueError("cannot normalize an empty sequence")
    lo = float(arr.min())
    hi = float(arr.max())
    if hi == lo:
        return np.full_like(arr, 0.5)
    return (arr - lo) / (hi - lo)
