import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from oracles import conv2d_direct, otsu_scan
from wordseg.preprocess import (
    NonPositiveSigma,
    binarize_otsu,
    gaussian_blur,
    gaussian_kernel,
    otsu_threshold,
)

images = hnp.arrays(np.uint8, hnp.array_shapes(min_dims=2, max_dims=2, min_side=1, max_side=24))


def test_kernel_delta_limit():
    k = gaussian_kernel(0.1)
    assert len(k) == 3
    assert k[1] > 0.999


@pytest.mark.parametrize("sigma", [0.1, 0.5, 1.0, 1.5, 2.0, 4.0, 7.3])
def test_kernel_normalized_symmetric(sigma):
    k = gaussian_kernel(sigma)
    assert len(k) == 2 * math.ceil(3 * sigma) + 1
    assert abs(k.sum() - 1.0) <= 1e-9
    assert np.array_equal(k, k[::-1])


def test_kernel_sigma_one():
    samples = [math.exp(-(i * i) / 2.0) for i in range(-3, 4)]
    k = gaussian_kernel(1.0)
    assert len(k) == 7
    assert k[3] == pytest.approx(samples[3] / sum(samples), abs=1e-12)
    assert k[3] == pytest.approx(0.3990502796524549, abs=1e-12)


@pytest.mark.parametrize("sigma", [0.0, -1.0])
def test_non_positive_sigma(sigma):
    with pytest.raises(NonPositiveSigma):
        gaussian_kernel(sigma)
    with pytest.raises(NonPositiveSigma):
        gaussian_blur(np.zeros((3, 3), np.uint8), sigma)


@pytest.mark.parametrize("v", [0, 1, 127, 254, 255])
def test_blur_constant_identity(v):
    img = np.full((9, 13), v, np.uint8)
    assert np.array_equal(gaussian_blur(img, 1.7), img)


def test_impulse_response():
    img = np.zeros((21, 21), np.uint8)
    img[10, 10] = 255
    k = gaussian_kernel(1.0)
    expected = np.zeros((21, 21))
    expected[7:14, 7:14] = 255 * np.outer(k, k)
    assert np.array_equal(gaussian_blur(img, 1.0), np.floor(expected + 0.5).astype(np.uint8))


def test_blur_matches_direct_2d(rng):
    for _ in range(3):
        img = rng.integers(0, 256, size=(32, 32), dtype=np.uint8)
        diff = gaussian_blur(img, 1.5).astype(int) - conv2d_direct(img, 1.5).astype(int)
        assert np.abs(diff).max() <= 1


@given(images, st.floats(0.3, 3.0))
def test_blur_commutes_with_mirror(img, sigma):
    assert np.array_equal(gaussian_blur(img[:, ::-1], sigma), gaussian_blur(img, sigma)[:, ::-1])


def test_otsu_perfectly_bimodal(rng):
    img = np.where(rng.random((20, 20)) < 0.4, 0, 255).astype(np.uint8)
    mask = binarize_otsu(img)
    assert np.array_equal(mask, img == 0)


def test_otsu_constant_image():
    assert not binarize_otsu(np.full((5, 5), 90, np.uint8)).any()
    assert otsu_threshold(np.full((5, 5), 90, np.uint8)) is None


def test_otsu_bimodal_gaussians(rng):
    dark = rng.normal(60, 12, size=3000)
    light = rng.normal(200, 15, size=7000)
    img = np.clip(np.concatenate([dark, light]), 0, 255).astype(np.uint8).reshape(100, 100)
    t = otsu_threshold(img)
    assert 100 <= t <= 170
    assert t == otsu_scan(img)
    assert np.array_equal(binarize_otsu(img), img < t)


@given(hnp.arrays(np.uint8, (12, 12), elements=st.integers(0, 255)))
def test_otsu_equals_exhaustive_scan(img):
    assert otsu_threshold(img) == otsu_scan(img)
