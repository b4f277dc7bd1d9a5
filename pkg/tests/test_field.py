import numpy as np
import pytest

from holosens.field import ComplexField, field_from_target, resize_bilinear
from holosens.rng import random_uniform


def _bilinear_oracle(img, resolution):
    """Direct per-sample evaluation of the pixel-center bilinear formula."""
    h, w = img.shape
    out = np.zeros((resolution, resolution))
    for yi in range(resolution):
        for xi in range(resolution):
            sy = min(max((yi + 0.5) * h / resolution - 0.5, 0.0), h - 1.0)
            sx = min(max((xi + 0.5) * w / resolution - 0.5, 0.0), w - 1.0)
            y0, x0 = int(np.floor(sy)), int(np.floor(sx))
            y1, x1 = min(y0 + 1, h - 1), min(x0 + 1, w - 1)
            fy, fx = sy - y0, sx - x0
            out[yi, xi] = (
                img[y0, x0] * (1 - fy) * (1 - fx)
                + img[y0, x1] * (1 - fy) * fx
                + img[y1, x0] * fy * (1 - fx)
                + img[y1, x1] * fy * fx
            )
    return out


def test_resize_constant_stays_constant():
    img = np.full((3, 5), 0.37)
    for m in (1, 2, 7):
        assert np.allclose(resize_bilinear(img, m), 0.37)


def test_resize_same_size_is_identity():
    img = np.array([[0.0, 1.0], [0.25, 0.5]])
    assert np.array_equal(resize_bilinear(img, 2), img)


def test_resize_matches_oracle_on_2x2_upsample():
    img = np.array([[0.0, 1.0], [0.0, 1.0]])
    assert np.allclose(resize_bilinear(img, 4), _bilinear_oracle(img, 4), atol=1e-15)


def test_resize_matches_oracle_on_random_images():
    img = random_uniform(21, 7 * 5).reshape(7, 5)
    for m in (3, 7, 11):
        assert np.allclose(resize_bilinear(img, m), _bilinear_oracle(img, m), atol=1e-14)


def test_resize_stays_in_unit_interval():
    img = random_uniform(4, 9 * 9).reshape(9, 9)
    out = resize_bilinear(img, 30)
    assert out.min() >= 0.0 and out.max() <= 1.0


def test_resize_rejects_zero_target():
    with pytest.raises(ValueError):
        resize_bilinear(np.ones((2, 2)), 0)


def test_field_from_unit_image_zero_phase():
    field = field_from_target(np.ones((3, 3)), 1e-5, np.zeros((3, 3)))
    assert np.array_equal(field.data, np.ones((3, 3), dtype=complex))
    assert field.pitch == 1e-5


def test_field_from_zero_image_any_phase():
    field = field_from_target(np.zeros((2, 2)), 1e-5, np.full((2, 2), 1.234))
    assert np.array_equal(field.data, np.zeros((2, 2), dtype=complex))


def test_field_quarter_intensity_quarter_turn():
    field = field_from_target(np.array([[0.25]]), 1e-5, np.array([[np.pi / 2]]))
    assert field.data[0, 0] == pytest.approx(0.0 + 0.5j, abs=1e-15)


def test_field_intensity_reproduces_source():
    img = random_uniform(8, 6 * 6).reshape(6, 6)
    phase = (random_uniform(9, 36).reshape(6, 6) - 0.5) * 2 * np.pi
    field = field_from_target(img, 2e-6, phase)
    assert np.max(np.abs(field.intensity() - img)) < 1e-12


def test_field_rejects_phase_size_mismatch():
    with pytest.raises(ValueError):
        field_from_target(np.ones((3, 3)), 1e-5, np.zeros(5))


def test_complex_field_invariants():
    with pytest.raises(ValueError):
        ComplexField(np.ones((2, 3), dtype=complex), 1e-5)
    with pytest.raises(ValueError):
        ComplexField(np.ones((2, 2), dtype=complex), 0.0)
    with pytest.raises(ValueError):
        ComplexField(np.array([[np.nan, 0], [0, 0]], dtype=complex), 1e-5)
