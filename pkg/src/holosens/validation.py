"""Input validation helpers used by the estimators and module functions."""

from __future__ import annotations

import numpy as np


def check_image(img, name: str = "image") -> np.ndarray:
    """Validate a 2-D intensity image and return it as float64.

    Samples must be finite and lie in [0, 1]; both dimensions must be >= 1.
    """
    arr = np.asarray(img, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"{name} must be a 2-D array with positive dimensions, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite samples")
    if arr.min() < 0.0 or arr.max() > 1.0:
        raise ValueError(f"{name} intensities must lie in [0, 1]")
    return arr


def check_intensity(img, name: str = "intensity") -> np.ndarray:
    """Validate a 2-D nonnegative intensity grid (upper range unbounded).

    Reconstructed intensities |E|^2 may exceed 1 under the unit-amplitude
    SLM constraint, so metrics accept them raw; targets stay in [0, 1].
    """
    arr = np.asarray(img, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"{name} must be a 2-D array with positive dimensions, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite samples")
    if arr.min() < 0.0:
        raise ValueError(f"{name} contains negative samples")
    return arr


def check_square_image(img, name: str = "image") -> np.ndarray:
    arr = check_image(img, name)
    if arr.shape[0] != arr.shape[1]:
        raise ValueError(f"{name} must be square, got shape {arr.shape}")
    return arr


def check_same_shape(a: np.ndarray, b: np.ndarray, what: str = "images") -> None:
    if a.shape != b.shape:
        raise ValueError(f"{what} must share a shape, got {a.shape} and {b.shape}")


def check_complex_grid(data, name: str = "field") -> np.ndarray:
    """Validate a square complex-amplitude grid and return it as complex128."""
    arr = np.asarray(data, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
        raise ValueError(f"{name} must be a square 2-D complex array, got shape {arr.shape}")
    if not (np.all(np.isfinite(arr.real)) and np.all(np.isfinite(arr.imag))):
        raise ValueError(f"{name} contains non-finite samples")
    return arr


def check_seed(seed) -> int:
    """Validate a 64-bit integer seed (values are reduced modulo 2**64)."""
    if not isinstance(seed, (int, np.integer)):
        raise TypeError(f"seed must be an integer, got {type(seed).__name__}")
    return int(seed) & 0xFFFFFFFFFFFFFFFF
