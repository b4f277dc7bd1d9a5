"""Portable deterministic random numbers (SplitMix64).

Every stochastic choice in this package flows through the SplitMix64
generator specified here so that a (seed, shape) pair reproduces bit-identical
output on any platform and in any execution order.  SplitMix64 advances a
64-bit counter by the golden-ratio increment and scrambles it with the
Stafford "mix13" finalizer; draw ``i`` (1-based) of stream ``seed`` is

    mix64((seed + i * 0x9E3779B97F4A7C15) mod 2**64)

Floats in [0, 1) take the top 53 bits: ``(z >> 11) * 2**-53``.
"""

from __future__ import annotations

import numpy as np

from .validation import check_seed

_MASK = 0xFFFFFFFFFFFFFFFF
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def mix64(value: int) -> int:
    """Scramble a 64-bit integer (SplitMix64 finalizer), pure Python."""
    z = value & _MASK
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK
    return z ^ (z >> 31)


def splitmix64(seed: int, count: int) -> np.ndarray:
    """Return the first `count` 64-bit outputs of the SplitMix64 stream."""
    seed = check_seed(seed)
    if count < 0:
        raise ValueError("count must be non-negative")
    idx = np.arange(1, count + 1, dtype=np.uint64)
    z = np.uint64(seed) + idx * np.uint64(_GAMMA)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
    return z ^ (z >> np.uint64(31))


def random_uniform(seed: int, count: int) -> np.ndarray:
    """I.i.d. uniforms on [0, 1), 53-bit resolution, from the seeded stream."""
    return (splitmix64(seed, count) >> np.uint64(11)) * 2.0**-53


def random_indices(seed: int, count: int, bound: int) -> np.ndarray:
    """I.i.d. integers uniform on {0, ..., bound-1} (floor of scaled uniforms)."""
    if bound < 1:
        raise ValueError("bound must be positive")
    return np.minimum((random_uniform(seed, count) * bound).astype(np.int64), bound - 1)


def random_phase(resolution: int, seed: int) -> np.ndarray:
    """Seeded random phase grid, i.i.d. uniform on [-pi, pi).

    Parameters
    ----------
    resolution : int
        Grid side length M (>= 2).  The grid is filled row-major from the
        stream, so the output is a pure function of (resolution, seed).
    seed : int
        64-bit stream seed.

    Returns
    -------
    ndarray, shape (M, M)
    """
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    u = random_uniform(seed, resolution * resolution)
    return (u * (2.0 * np.pi) - np.pi).reshape(resolution, resolution)


def combine_seeds(*parts: int) -> int:
    """Fold integers into one 64-bit seed.

    Used to derive per-work-item seeds, e.g. ``combine_seeds(master, row,
    image)``, so parallel scheduling cannot perturb any stream.  The fold is
    ``h <- mix64((h + GAMMA) ^ part)`` starting from h = 0; it is sensitive
    to argument order.
    """
    h = 0
    for part in parts:
        h = mix64(((h + _GAMMA) & _MASK) ^ check_seed(part))
    return h
