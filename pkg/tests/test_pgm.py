import numpy as np
import pytest

from holosens.exceptions import MalformedHeaderError
from holosens.pgm import load_grayscale, save_grayscale


def test_load_scales_by_maxval(tmp_path):
    path = tmp_path / "t.pgm"
    path.write_bytes(b"P5\n2 2\n255\n" + bytes([0, 255, 128, 64]))
    img = load_grayscale(path)
    assert np.allclose(img, [[0.0, 1.0], [128 / 255, 64 / 255]])
    assert img[1, 0] == pytest.approx(0.50196, abs=1e-5)
    assert img[1, 1] == pytest.approx(0.25098, abs=1e-5)


def test_maxval_zero_is_malformed(tmp_path):
    path = tmp_path / "t.pgm"
    path.write_bytes(b"P5\n2 2\n0\n" + bytes(4))
    with pytest.raises(MalformedHeaderError):
        load_grayscale(path)


def test_round_trip_preserves_samples(tmp_path):
    raw = bytes([0, 255, 128, 64, 7, 99])
    src = tmp_path / "src.pgm"
    src.write_bytes(b"P5\n3 2\n255\n" + raw)
    img = load_grayscale(src)
    dst = tmp_path / "dst.pgm"
    save_grayscale(dst, img, maxval=255)
    assert np.array_equal(load_grayscale(dst), img)
    # raster bytes survive the quantize-dequantize cycle exactly
    assert dst.read_bytes().endswith(raw)


def test_sixteen_bit_round_trip(tmp_path):
    rng = np.random.default_rng(0)
    img = rng.integers(0, 65536, size=(5, 4)).astype(np.float64) / 65535
    path = tmp_path / "wide.pgm"
    save_grayscale(path, img, maxval=65535)
    assert np.array_equal(load_grayscale(path), img)


def test_header_comments_and_whitespace(tmp_path):
    path = tmp_path / "c.pgm"
    path.write_bytes(b"P5 # magic\n# a comment line\n 2\t2 # dims\n255\n" + bytes([1, 2, 3, 4]))
    img = load_grayscale(path)
    assert img.shape == (2, 2)
    assert img[0, 0] == pytest.approx(1 / 255)


def test_missing_file_raises():
    with pytest.raises(FileNotFoundError):
        load_grayscale("/nonexistent/image.pgm")


@pytest.mark.parametrize(
    "payload",
    [
        b"P6\n2 2\n255\n" + bytes(12),          # wrong magic
        b"P5\n2 x\n255\n" + bytes(4),           # non-numeric token
        b"P5\n2 2\n70000\n" + bytes(8),         # maxval too large
        b"P5\n2 2\n255\n" + bytes(3),           # short raster
        b"P5\n2 2\n255",                        # missing raster separator
    ],
)
def test_malformed_inputs(tmp_path, payload):
    path = tmp_path / "bad.pgm"
    path.write_bytes(payload)
    with pytest.raises(MalformedHeaderError):
        load_grayscale(path)


def test_save_rejects_out_of_range(tmp_path):
    with pytest.raises(ValueError):
        save_grayscale(tmp_path / "x.pgm", np.array([[1.5]]))
