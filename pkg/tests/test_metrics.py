import numpy as np
import pytest

from holosens.exceptions import DegenerateInputError
from holosens.metrics import accuracy, minmax_normalize, psnr, ssim
from holosens.rng import random_uniform


def _gaussian_kernel_2d():
    x = np.arange(11) - 5.0
    g = np.exp(-(x**2) / (2 * 1.5**2))
    k = np.outer(g, g)
    return k / k.sum()


def _ssim_oracle(a, b):
    """Per-window double-loop SSIM with explicit weighted moments."""
    kernel = _gaussian_kernel_2d()
    c1, c2 = 0.01**2, 0.03**2
    h, w = a.shape
    scores = []
    for y in range(h - 10):
        for x in range(w - 10):
            wa = a[y : y + 11, x : x + 11]
            wb = b[y : y + 11, x : x + 11]
            mu_a = (kernel * wa).sum()
            mu_b = (kernel * wb).sum()
            var_a = (kernel * wa * wa).sum() - mu_a**2
            var_b = (kernel * wb * wb).sum() - mu_b**2
            cov = (kernel * wa * wb).sum() - mu_a * mu_b
            scores.append(
                ((2 * mu_a * mu_b + c1) * (2 * cov + c2))
                / ((mu_a**2 + mu_b**2 + c1) * (var_a + var_b + c2))
            )
    return float(np.mean(scores))


def test_psnr_identical_hits_epsilon_cap():
    img = random_uniform(1, 16 * 16).reshape(16, 16)
    assert psnr(img, img) == pytest.approx(120.0, abs=1e-6)


def test_psnr_half_vs_one():
    a = np.full((8, 8), 0.5)
    b = np.ones((8, 8))
    assert psnr(a, b) == pytest.approx(10 * np.log10(4.0), abs=1e-6)
    assert psnr(a, b) == pytest.approx(6.0206, abs=1e-4)


def test_psnr_maximal_error_is_zero_db():
    assert psnr(np.zeros((4, 4)), np.ones((4, 4))) == pytest.approx(0.0, abs=1e-9)


def test_psnr_symmetric():
    a = random_uniform(2, 64).reshape(8, 8)
    b = random_uniform(3, 64).reshape(8, 8)
    assert psnr(a, b) == psnr(b, a)


def test_psnr_decreases_with_noise():
    target = random_uniform(4, 32 * 32).reshape(32, 32) * 0.5 + 0.25
    noise = random_uniform(5, 32 * 32).reshape(32, 32) - 0.5
    values = [psnr(np.clip(target + amp * noise, 0, 1), target) for amp in (0.05, 0.15, 0.3)]
    assert values[0] > values[1] > values[2]


def test_ssim_identity():
    img = random_uniform(6, 32 * 32).reshape(32, 32)
    assert ssim(img, img) == pytest.approx(1.0, abs=1e-12)


def test_ssim_constant_images_closed_form():
    a = np.zeros((16, 16))
    b = np.ones((16, 16))
    expected = 1e-4 / 1.0001  # (2*0*1 + C1)/(0 + 1 + C1), variance terms cancel
    assert ssim(a, b) == pytest.approx(expected, rel=1e-12)


def test_ssim_matches_window_oracle():
    a = random_uniform(7, 32 * 32).reshape(32, 32)
    b = np.clip(a + 0.2 * (random_uniform(8, 32 * 32).reshape(32, 32) - 0.5), 0, 1)
    assert ssim(a, b) == pytest.approx(_ssim_oracle(a, b), abs=1e-10)


def test_ssim_symmetric():
    a = random_uniform(9, 32 * 32).reshape(32, 32)
    b = random_uniform(10, 32 * 32).reshape(32, 32)
    assert ssim(a, b) == pytest.approx(ssim(b, a), abs=1e-12)


def test_ssim_rejects_small_images():
    with pytest.raises(ValueError):
        ssim(np.ones((8, 8)), np.ones((8, 8)))


def test_accuracy_identmeasures():
    img = random_uniform(11, 8 * 8).reshape(8, 8) + 0.01
    assert accuracy(img, img) == pytest.approx(1.0, abs=1e-12)


def test_accuracy_disjoint_supports():
    a = np.zeros((2, 2))
    b = np.zeros((2, 2))
    a[0, 0] = 1.0
    b[1, 1] = 1.0
    assert accuracy(a, b) == 0.0


def test_accuracy_hand_value():
    a = np.array([[1.0, 0.0]])
    b = np.array([[1.0, 1.0]])
    assert accuracy(a, b) == pytest.approx(1 / np.sqrt(2), abs=1e-12)
    assert accuracy(a, b) == pytest.approx(0.70711, abs=1e-5)


def test_accuracy_symmetric():
    a = random_uniform(12, 36).reshape(6, 6)
    b = random_uniform(13, 36).reshape(6, 6)
    assert accuracy(a, b) == accuracy(b, a)


def test_accuracy_rejects_zero_image():
    with pytest.raises(DegenerateInputError):
        accuracy(np.zeros((2, 2)), np.ones((2, 2)))


def test_minmax_examples():
    assert np.allclose(minmax_normalize([2, 4, 6]), [0, 0.5, 1])
    assert np.allclose(minmax_normalize([5, 5, 5]), [0.5, 0.5, 0.5])
    assert np.allclose(minmax_normalize([-1, 0, 3]), [0, 0.25, 1])


def test_minmax_is_order_preserving_and_bounded():
    x = random_uniform(14, 50) * 10 - 5
    out = minmax_normalize(x)
    assert out.min() >= 0.0 and out.max() <= 1.0
    assert np.array_equal(np.argsort(out), np.argsort(x))


def test_minmax_rejects_empty():
    with pytest.raises(ValueError):
        minmax_normalize([])


def test_metrics_accept_bright_reconstructions():
    # reconstructions may exceed 1; targets may not
    recon = np.full((16, 16), 1.7)
    target = np.ones((16, 16))
    assert psnr(recon, target) == pytest.approx(10 * np.log10(1 / 0.49), abs=1e-6)
    with pytest.raises(ValueError):
        psnr(target, np.full((16, 16), -0.1))
