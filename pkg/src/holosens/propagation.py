"""Forward models: lens-based Fourier holography and band-limited angular
spectrum free-space propagation.

Both transforms are unitary (orthonormal 2-D DFTs), so intensity-ratio
metrics are insensitive to the global complex scale that a physical lens
would add.  The angular spectrum transfer function is band-limited to
suppress aliasing of its sampled phase: a frequency sample survives only
inside the propagating disk u^2 + v^2 <= 1/lambda^2 and inside the
rectangular limit |u| <= u_BL, |v| <= v_BL with

    u_BL = 1 / (lambda * sqrt((2 * d * du)^2 + 1)),   du = 1 / (M * pitch)

and symmetrically for v.  In-band samples are the pure phase
exp(i * 2*pi * w(u, v) * sign * d) with w = sqrt(1/lambda^2 - u^2 - v^2).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator

from .field import ComplexField


@dataclass(frozen=True)
class OpticsConfig:
    """One point in the forward-model hyperparameter space.

    Attributes
    ----------
    wavelength : float
        Vacuum wavelength in meters (> 0).
    pixel_pitch : float
        SLM pixel pitch in meters (> 0); square pixels assumed.
    resolution : int
        SLM pixel resolution M (square grid, >= 2).
    distance : float
        Propagation distance in meters (>= 0); only the free-space model
        consults it.
    """

    wavelength: float
    pixel_pitch: float
    resolution: int
    distance: float

    def __post_init__(self):
        if not self.wavelength > 0:
            raise ValueError(f"wavelength must be positive, got {self.wavelength}")
        if not self.pixel_pitch > 0:
            raise ValueError(f"pixel_pitch must be positive, got {self.pixel_pitch}")
        if int(self.resolution) != self.resolution or self.resolution < 2:
            raise ValueError(f"resolution must be an integer >= 2, got {self.resolution}")
        if self.distance < 0:
            raise ValueError(f"distance must be non-negative, got {self.distance}")
        object.__setattr__(self, "resolution", int(self.resolution))


def _dft2(data: np.ndarray, direction: str) -> np.ndarray:
    if direction == "forward":
        return np.fft.fft2(data, norm="ortho")
    if direction == "inverse":
        return np.fft.ifft2(data, norm="ortho")
    raise ValueError(f"direction must be 'forward' or 'inverse', got {direction!r}")


def _centered_dft2(data: np.ndarray, direction: str) -> np.ndarray:
    # DC at the grid center on both sides; realized by index shifts around
    # the plain transform, which preserves unitarity exactly.
    return np.fft.fftshift(_dft2(np.fft.ifftshift(data), direction))


def unitary_dft2(field: ComplexField, direction: str = "forward") -> ComplexField:
    """Orthonormal 2-D DFT in standard (DC-first, wrapped) index order.

    Both directions scale by 1/M per axis, so inverse(forward(x)) == x and
    the L2 norm is preserved.
    """
    return ComplexField(_dft2(field.data, direction), field.pitch)


def propagate_fourier(field: ComplexField, direction: str = "forward") -> ComplexField:
    """Lens-based Fourier holography: centered unitary DFT (inverse for the
    return trip).  The lens phase prefactor is omitted; see module docs."""
    return ComplexField(_centered_dft2(field.data, direction), field.pitch)


def asm_transfer(optics: OpticsConfig, sign: int = 1) -> np.ndarray:
    """Band-limited angular spectrum transfer function, DFT index order.

    Parameters
    ----------
    optics : OpticsConfig
    sign : {+1, -1}
        Propagation over +distance or -distance (the return trip).

    Returns
    -------
    ndarray, shape (M, M), complex128
        Each sample is either 0 (outside the propagating disk or the band
        limit) or unit-modulus.
    """
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    m = optics.resolution
    u = np.fft.fftfreq(m, d=optics.pixel_pitch)  # cycles per meter
    uu = u[:, None] ** 2
    vv = u[None, :] ** 2
    inv_lam2 = 1.0 / optics.wavelength**2

    du = 1.0 / (m * optics.pixel_pitch)
    u_limit = 1.0 / (optics.wavelength * np.sqrt((2.0 * optics.distance * du) ** 2 + 1.0))
    in_band = (
        (uu + vv <= inv_lam2)
        & (np.abs(u)[:, None] <= u_limit)
        & (np.abs(u)[None, :] <= u_limit)
    )

    w = np.sqrt(np.maximum(inv_lam2 - uu - vv, 0.0))
    h = np.exp(1j * (2.0 * np.pi * sign * optics.distance) * w)
    h[~in_band] = 0.0
    return h


def propagate_asm(field: ComplexField, optics: OpticsConfig, direction: str = "forward") -> ComplexField:
    """Free-space propagation by the band-limited angular spectrum method.

    Multiplies the field spectrum elementwise with the transfer function for
    +d (forward) or -d (inverse) and transforms back.  The field grid must
    match the optics configuration.
    """
    if field.size != optics.resolution:
        raise ValueError(f"field size {field.size} does not match resolution {optics.resolution}")
    if field.pitch != optics.pixel_pitch:
        raise ValueError(f"field pitch {field.pitch} does not match pixel pitch {optics.pixel_pitch}")
    sign = 1 if direction == "forward" else -1 if direction == "inverse" else None
    if sign is None:
        raise ValueError(f"direction must be 'forward' or 'inverse', got {direction!r}")
    spectrum = _dft2(field.data, "forward") * asm_transfer(optics, sign)
    return ComplexField(_dft2(spectrum, "inverse"), field.pitch)


class FourierPropagator(BaseEstimator):
    """Fourier-holography forward model on raw (M, M) complex arrays.

    Stateless transformer; `transform` is the SLM-to-target direction and
    `inverse_transform` the return trip.
    """

    def fit(self, X=None, y=None):
        return self

    def forward(self, data: np.ndarray) -> np.ndarray:
        return _centered_dft2(data, "forward")

    def inverse(self, data: np.ndarray) -> np.ndarray:
        return _centered_dft2(data, "inverse")

    transform = forward
    inverse_transform = inverse


class AngularSpectrumPropagator(BaseEstimator):
    """Band-limited angular spectrum forward model on raw complex arrays.

    Caches the +d/-d transfer-function pair per grid size, so repeated calls
    (e.g. inside an iterative retrieval loop) pay for it once.
    """

    def __init__(self, wavelength: float, pixel_pitch: float, distance: float):
        self.wavelength = wavelength
        self.pixel_pitch = pixel_pitch
        self.distance = distance

    def fit(self, X=None, y=None):
        if X is not None:
            self._pair(np.asarray(X).shape[0])
        return self

    def _pair(self, resolution: int) -> tuple[np.ndarray, np.ndarray]:
        cache = getattr(self, "transfer_cache_", None)
        if cache is None or cache[0] != resolution:
            optics = OpticsConfig(self.wavelength, self.pixel_pitch, resolution, self.distance)
            self.transfer_cache_ = (resolution, asm_transfer(optics, 1), asm_transfer(optics, -1))
        return self.transfer_cache_[1], self.transfer_cache_[2]

    def forward(self, data: np.ndarray) -> np.ndarray:
        h_plus, _ = self._pair(data.shape[0])
        return _dft2(_dft2(data, "forward") * h_plus, "inverse")

    def inverse(self, data: np.ndarray) -> np.ndarray:
        _, h_minus = self._pair(data.shape[0])
        return _dft2(_dft2(data, "forward") * h_minus, "inverse")

    transform = forward
    inverse_transform = inverse


def make_propagator(forward_model: str, optics: OpticsConfig):
    """Instantiate the propagator named by `forward_model` ('fourier'|'asm')."""
    if forward_model == "fourier":
        return FourierPropagator()
    if forward_model == "asm":
        return AngularSpectrumPropagator(optics.wavelength, optics.pixel_pitch, optics.distance)
    raise ValueError(f"unknown forward model {forward_model!r}")
