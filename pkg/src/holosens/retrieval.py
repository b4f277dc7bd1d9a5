"""Gerchberg-Saxton phase retrieval with per-iteration metric tracing.

One iteration alternates the two amplitude constraints: impose the target
amplitude sqrt(I) with the current phase, propagate back to the SLM plane,
keep only the phase there (uniform SLM amplitude), propagate forward again,
and keep the resulting phase.  Metrics compare |E|^2 against the target
after each full cycle, without rescaling; the forward transforms are
unitary and targets are normalized, so no scale calibration is needed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator

from .metrics import SsimReference, accuracy, psnr
from .propagation import OpticsConfig, make_propagator
from .rng import random_phase
from .validation import check_square_image

FORWARD_MODELS = ("fourier", "asm")


@dataclass
class GsConfig:
    """Configuration of one retrieval run.

    For the 'fourier' forward model only `optics.resolution` is consulted;
    wavelength, pitch and distance are inert.  `initial_phase` overrides the
    seeded random starting phase when given (e.g. to hand over an externally
    predicted phase); otherwise the phase is `random_phase(M, seed)`.
    """

    forward_model: str
    optics: OpticsConfig
    iterations: int = 30
    seed: int = 0
    slm_amplitude: float = 1.0
    initial_phase: np.ndarray | None = None

    def __post_init__(self):
        if self.forward_model not in FORWARD_MODELS:
            raise ValueError(f"forward_model must be one of {FORWARD_MODELS}, got {self.forward_model!r}")
        if self.iterations < 1:
            raise ValueError("iterations must be at least 1")
        if not self.slm_amplitude > 0:
            raise ValueError("slm_amplitude must be positive")


@dataclass
class GsTrace:
    """Per-iteration reconstruction metrics plus the final solution.

    Arrays are indexed by iteration (entry t belongs to iteration t+1).
    Phases are wrapped to [-pi, pi].
    """

    psnr_db: np.ndarray
    ssim: np.ndarray
    accuracy: np.ndarray
    final_slm_phase: np.ndarray
    final_reconstruction: np.ndarray

    @property
    def iterations(self) -> int:
        return len(self.psnr_db)

    def records(self) -> list[tuple[int, float, float, float]]:
        """Rows of (iteration, psnr_db, ssim, accuracy), iteration 1-based."""
        return [
            (t + 1, float(self.psnr_db[t]), float(self.ssim[t]), float(self.accuracy[t]))
            for t in range(self.iterations)
        ]


def gs_run(target, config: GsConfig) -> GsTrace:
    """Run Gerchberg-Saxton retrieval against a square target intensity.

    Parameters
    ----------
    target : ndarray, shape (M, M)
        Intensities in [0, 1]; M must equal `config.optics.resolution`.
    config : GsConfig

    Returns
    -------
    GsTrace
        One metric record per iteration plus the final SLM phase and the
        final reconstruction intensity.  The result is a pure function of
        (target, config).
    """
    target = check_square_image(target, "target")
    m = config.optics.resolution
    if target.shape[0] != m:
        raise ValueError(f"target is {target.shape[0]}x{target.shape[1]} but resolution is {m}")

    if config.initial_phase is not None:
        phase = np.asarray(config.initial_phase, dtype=np.float64)
        if phase.size != m * m:
            raise ValueError(f"initial_phase has {phase.size} values for a {m}x{m} grid")
        phase = phase.reshape(m, m).copy()
    else:
        phase = random_phase(m, config.seed)

    propagator = make_propagator(config.forward_model, config.optics)
    amplitude = np.sqrt(target)
    ssim_ref = SsimReference(target)
    psnr_t = np.empty(config.iterations)
    ssim_t = np.empty(config.iterations)
    acc_t = np.empty(config.iterations)
    slm_phase = None
    recon = None

    for t in range(config.iterations):
        e_target = amplitude * np.exp(1j * phase)
        slm_phase = np.angle(propagator.inverse(e_target))
        e_target = propagator.forward(config.slm_amplitude * np.exp(1j * slm_phase))
        phase = np.angle(e_target)
        recon = np.abs(e_target) ** 2
        psnr_t[t] = psnr(recon, target)
        ssim_t[t] = ssim_ref.score(recon)
        acc_t[t] = accuracy(recon, target)

    return GsTrace(psnr_t, ssim_t, acc_t, slm_phase, recon)


class GerchbergSaxton(BaseEstimator):
    """Estimator-style front end to `gs_run`.

    `fit(target)` retrieves the SLM phase whose propagation reproduces the
    target intensity and stores the results as `slm_phase_`,
    `reconstruction_` and `trace_`.  Wavelength, pixel pitch and distance
    only matter for the free-space ('asm') forward model.
    """

    def __init__(
        self,
        forward_model: str = "fourier",
        wavelength: float = 1e-6,
        pixel_pitch: float = 4.2e-5,
        distance: float = 0.75,
        iterations: int = 30,
        seed: int = 0,
        slm_amplitude: float = 1.0,
        initial_phase=None,
    ):
        self.forward_model = forward_model
        self.wavelength = wavelength
        self.pixel_pitch = pixel_pitch
        self.distance = distance
        self.iterations = iterations
        self.seed = seed
        self.slm_amplitude = slm_amplitude
        self.initial_phase = initial_phase

    def _config(self, resolution: int) -> GsConfig:
        optics = OpticsConfig(self.wavelength, self.pixel_pitch, resolution, self.distance)
        return GsConfig(
            forward_model=self.forward_model,
            optics=optics,
            iterations=self.iterations,
            seed=self.seed,
            slm_amplitude=self.slm_amplitude,
            initial_phase=self.initial_phase,
        )

    def fit(self, X, y=None):
        target = check_square_image(X, "target")
        self.trace_ = gs_run(target, self._config(target.shape[0]))
        self.slm_phase_ = self.trace_.final_slm_phase
        self.reconstruction_ = self.trace_.final_reconstruction
        return self

    def predict(self, X=None) -> np.ndarray:
        """Return the reconstruction intensity of the fitted run."""
        if not hasattr(self, "reconstruction_"):
            raise RuntimeError("call fit() before predict()")
        return self.reconstruction_

    def score(self, X, y=None) -> float:
        """PSNR (dB) of the fitted reconstruction against a target."""
        if not hasattr(self, "reconstruction_"):
            raise RuntimeError("call fit() before score()")
        return psnr(self.reconstruction_, X)
