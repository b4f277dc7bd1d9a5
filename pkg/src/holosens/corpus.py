"""Deterministic synthetic grayscale corpus for experiments and tests.

Images mix smooth gradients, Gaussian blobs, gratings and blocky texture so
retrieval targets carry both low- and high-frequency content.  Everything
derives from the portable package PRNG, so a (seed, count, size) triple
reproduces identical files anywhere.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .pgm import save_grayscale
from .rng import combine_seeds, random_uniform


def _fractal_texture(size: int, seed: int, exponent: float = 1.1) -> np.ndarray:
    """Random field with a 1/f^exponent amplitude spectrum.

    Mimics the spectral falloff of photographs, so downsampling to a coarser
    grid removes detail and finer grids genuinely carry more of it.
    """
    u = random_uniform(seed, 2 * size * size)
    spectrum = (u[: size * size] - 0.5) + 1j * (u[size * size :] - 0.5)
    spectrum = spectrum.reshape(size, size)
    f = np.fft.fftfreq(size)
    radius = np.sqrt(f[:, None] ** 2 + f[None, :] ** 2)
    weight = 1.0 / (radius + 1.0 / size) ** exponent
    weight[0, 0] = 0.0
    texture = np.fft.ifft2(spectrum * weight).real
    lo, hi = texture.min(), texture.max()
    return (texture - lo) / (hi - lo) if hi > lo else np.full_like(texture, 0.5)


def synthetic_image(size: int, seed: int) -> np.ndarray:
    """One synthetic intensity image in [0, 1]."""
    u = random_uniform(seed, 16)
    yy, xx = np.mgrid[0:size, 0:size] / max(size - 1, 1)

    img = 0.85 * _fractal_texture(size, combine_seeds(seed, 1))

    angle = 2.0 * np.pi * u[0]
    img += 0.25 * (np.cos(angle) * xx + np.sin(angle) * yy)

    for b in range(3):
        cx, cy, radius, gain = u[1 + 4 * b : 5 + 4 * b]
        r2 = (xx - cx) ** 2 + (yy - cy) ** 2
        img += (0.55 * gain - 0.15) * np.exp(-r2 / (0.003 + 0.04 * radius**2))

    freq = 4.0 + 28.0 * u[13]
    img += 0.1 * u[14] * np.sin(2.0 * np.pi * freq * (xx * u[15] + yy * (1.0 - u[15])))

    lo, hi = img.min(), img.max()
    return (img - lo) / (hi - lo) if hi > lo else np.full_like(img, 0.5)


def generate_corpus(directory, count: int = 10, size: int = 256, seed: int = 0) -> list[str]:
    """Write `count` synthetic PGM images into a directory; returns paths."""
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for i in range(count):
        path = out / f"synthetic_{i:03d}.pgm"
        save_grayscale(path, synthetic_image(size, combine_seeds(seed, i)))
        paths.append(str(path))
    return paths


if __name__ == "__main__":
    import argparse

    parser = argparse.ArgumentParser(description="generate a synthetic PGM corpus")
    parser.add_argument("directory")
    parser.add_argument("--count", type=int, default=10)
    parser.add_argument("--size", type=int, default=256)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    for p in generate_corpus(args.directory, args.count, args.size, args.seed):
        print(p)
