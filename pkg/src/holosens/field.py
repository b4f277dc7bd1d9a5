"""Complex-field representation and image resampling."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .validation import check_complex_grid, check_image, check_square_image


@dataclass
class ComplexField:
    """A square grid of complex amplitudes sampled at the SLM pixel pitch.

    Attributes
    ----------
    data : ndarray, shape (M, M), complex128
    pitch : float
        Sample spacing in meters (> 0).
    """

    data: np.ndarray
    pitch: float

    def __post_init__(self):
        self.data = check_complex_grid(self.data)
        if not (np.isfinite(self.pitch) and self.pitch > 0):
            raise ValueError(f"pitch must be positive, got {self.pitch}")

    @property
    def size(self) -> int:
        return self.data.shape[0]

    def intensity(self) -> np.ndarray:
        return np.abs(self.data) ** 2

    def phase(self) -> np.ndarray:
        return np.angle(self.data)


def resize_bilinear(image, resolution: int) -> np.ndarray:
    """Resample an intensity image onto an M x M grid by bilinear interpolation.

    Each axis is scaled independently (aspect ratio is not preserved) using
    the pixel-center convention, so resizing to the source size is the
    identity and constants map to constants.  Output samples stay in [0, 1]
    because every sample is a convex combination of inputs.
    """
    img = check_image(image)
    if resolution < 1:
        raise ValueError("target resolution must be at least 1")
    h, w = img.shape
    out = np.empty((resolution, resolution), dtype=np.float64)

    def _axis(src: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        coords = (np.arange(resolution) + 0.5) * (src / resolution) - 0.5
        coords = np.clip(coords, 0.0, src - 1.0)
        lo = np.floor(coords).astype(np.intp)
        hi = np.minimum(lo + 1, src - 1)
        return lo, hi, coords - lo

    y0, y1, fy = _axis(h)
    x0, x1, fx = _axis(w)
    fy = fy[:, None]
    fx = fx[None, :]
    top = img[y0][:, x0] * (1.0 - fx) + img[y0][:, x1] * fx
    bot = img[y1][:, x0] * (1.0 - fx) + img[y1][:, x1] * fx
    out[:] = top * (1.0 - fy) + bot * fy
    return out


def field_from_target(image, pitch: float, phase) -> ComplexField:
    """Build the complex field sqrt(I) * exp(i*phase) from a target intensity.

    The amplitude is the square root of the intensity, so the field's
    intensity reproduces the input image.  `phase` must match the image
    shape (or be a flat array of M*M values).
    """
    img = check_square_image(image, "target")
    ph = np.asarray(phase, dtype=np.float64)
    if ph.size != img.size:
        raise ValueError(f"phase has {ph.size} values for a {img.shape[0]}x{img.shape[1]} target")
    ph = ph.reshape(img.shape)
    return ComplexField(np.sqrt(img) * np.exp(1j * ph), pitch)
