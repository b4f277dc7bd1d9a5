"""Binary PGM (P5) reader/writer.

Follows the Netpbm specification: ASCII magic ``P5``, whitespace-separated
width, height and maxval tokens (``#`` comments allowed between tokens),
a single whitespace byte, then the raster.  Samples are one byte for
maxval < 256 and two bytes big-endian for maxval up to 65535.  Intensities
are normalized per image by dividing raw samples by the declared maxval.
"""

from __future__ import annotations

import os
from pathlib import Path

import numpy as np

from .exceptions import MalformedHeaderError
from .validation import check_image

_WHITESPACE = b" \t\n\r\x0b\x0c"


def _next_token(buf: bytes, pos: int) -> tuple[bytes, int]:
    # skip whitespace and '#' comments, then collect one token
    n = len(buf)
    while pos < n:
        c = buf[pos:pos + 1]
        if c in _WHITESPACE:
            pos += 1
        elif c == b"#":
            while pos < n and buf[pos:pos + 1] != b"\n":
                pos += 1
        else:
            break
    start = pos
    while pos < n and buf[pos:pos + 1] not in _WHITESPACE and buf[pos:pos + 1] != b"#":
        pos += 1
    if start == pos:
        raise MalformedHeaderError("truncated PGM header")
    return buf[start:pos], pos


def _int_token(buf: bytes, pos: int, what: str) -> tuple[int, int]:
    token, pos = _next_token(buf, pos)
    if not token.isdigit():
        raise MalformedHeaderError(f"non-numeric {what} token {token!r}")
    return int(token), pos


def load_grayscale(path: str | os.PathLike) -> np.ndarray:
    """Load a binary PGM as float64 intensities in [0, 1].

    Raises
    ------
    FileNotFoundError
        If the file does not exist.
    MalformedHeaderError
        On a bad magic number, malformed header token, maxval outside
        [1, 65535], or a short raster.
    """
    buf = Path(path).read_bytes()
    magic, pos = _next_token(buf, 0)
    if magic != b"P5":
        raise MalformedHeaderError(f"not a binary PGM (magic {magic!r})")
    width, pos = _int_token(buf, pos, "width")
    height, pos = _int_token(buf, pos, "height")
    maxval, pos = _int_token(buf, pos, "maxval")
    if width < 1 or height < 1:
        raise MalformedHeaderError(f"invalid dimensions {width}x{height}")
    if maxval == 0:
        raise MalformedHeaderError("maxval 0 would divide by zero")
    if maxval > 65535:
        raise MalformedHeaderError(f"maxval {maxval} exceeds 65535")
    if pos >= len(buf) or buf[pos:pos + 1] not in _WHITESPACE:
        raise MalformedHeaderError("missing whitespace before raster")
    pos += 1  # exactly one whitespace byte separates header and raster

    dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
    count = width * height
    raster = buf[pos:pos + count * dtype.itemsize]
    if len(raster) < count * dtype.itemsize:
        raise MalformedHeaderError("raster shorter than declared dimensions")
    raw = np.frombuffer(raster, dtype=dtype).reshape(height, width)
    return raw.astype(np.float64) / float(maxval)


def save_grayscale(path: str | os.PathLike, image, maxval: int = 255) -> None:
    """Write intensities in [0, 1] as a binary PGM.

    Samples are quantized with round-half-away rounding to the given maxval,
    so ``load -> save -> load`` reproduces the original samples exactly.
    """
    img = check_image(image)
    if not 1 <= maxval <= 65535:
        raise ValueError("maxval must be in [1, 65535]")
    raw = np.rint(img * maxval)
    dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
    header = f"P5\n{img.shape[1]} {img.shape[0]}\n{maxval}\n".encode("ascii")
    Path(path).write_bytes(header + raw.astype(dtype).tobytes())
