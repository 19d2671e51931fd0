"""Noise removal and binarization of a gray page."""
from __future__ import annotations

import math

import numpy as np


class NonPositiveSigma(ValueError):
    pass


def gaussian_kernel(sigma: float) -> np.ndarray:
    """Symmetric, normalized 1-D Gaussian of radius ``ceil(3 * sigma)``."""
    if not sigma > 0:
        raise NonPositiveSigma(f"sigma must be positive, got {sigma}")
    radius = int(math.ceil(3.0 * sigma))
    offsets = np.arange(-radius, radius + 1, dtype=np.float64)
    k = np.exp(-(offsets**2) / (2.0 * sigma * sigma))
    return k / k.sum()


def _convolve_rows(arr: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    # Fixed tap order; mirrored taps are added pairwise first, so the result
    # is bit-identical under horizontal mirroring of the input.
    r = len(kernel) // 2
    padded = np.pad(arr, ((0, 0), (r, r)), mode="edge")
    w = arr.shape[1]
    acc = kernel[r] * arr
    for j in range(1, r + 1):
        acc = acc + kernel[r + j] * (padded[:, r - j : r - j + w] + padded[:, r + j : r + j + w])
    return acc


def _round_half_up(values: np.ndarray) -> np.ndarray:
    return np.clip(np.floor(values + 0.5), 0, 255).astype(np.uint8)


def gaussian_blur(img: np.ndarray, sigma: float) -> np.ndarray:
    """Separable Gaussian blur with edge replication.

    The horizontal pass runs first; the intermediate stays in float64 and the
    result is rounded half up and clamped to [0, 255] only once, at the end.
    """
    kernel = gaussian_kernel(sigma)
    src = np.asarray(img, dtype=np.float64)
    horiz = _convolve_rows(src, kernel)
    vert = _convolve_rows(horiz.T, kernel).T
    return _round_half_up(vert)


def otsu_threshold(img: np.ndarray) -> int | None:
    """Threshold ``t`` maximizing between-class variance of ``{< t}`` vs ``{>= t}``.

    Ties go to the lowest ``t``. Returns None when only one intensity occurs.
    The comparison is done in exact integer arithmetic.
    """
    hist = np.bincount(np.asarray(img, dtype=np.uint8).ravel(), minlength=256)
    if np.count_nonzero(hist) <= 1:
        return None
    counts = [int(c) for c in hist]
    total_n = sum(counts)
    total_s = sum(i * c for i, c in enumerate(counts))
    best_t = None
    best_num, best_den = -1, 1
    n0 = s0 = 0
    for t in range(1, 256):
        n0 += counts[t - 1]
        s0 += (t - 1) * counts[t - 1]
        n1 = total_n - n0
        if n0 == 0 or n1 == 0:
            continue
        s1 = total_s - s0
        # between-class variance is proportional to (s0*n1 - s1*n0)^2 / (n0*n1)
        num = (s0 * n1 - s1 * n0) ** 2
        den = n0 * n1
        if num * best_den > best_num * den:
            best_num, best_den, best_t = num, den, t
    return best_t


def binarize_otsu(img: np.ndarray) -> np.ndarray:
    """Ink mask of a dark-on-light page: pixels strictly below the Otsu threshold."""
    t = otsu_threshold(img)
    if t is None:
        return np.zeros(np.shape(img), dtype=bool)
    return np.asarray(img) < t


def binarize_fixed(img: np.ndarray, threshold: int) -> np.ndarray:
    return np.asarray(img) < threshold
