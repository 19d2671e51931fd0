"""Exact squared Euclidean distance transform to the nearest ink pixel.

`edt_exact` is the separable two-phase method: a per-column scan gives the
vertical distance to the nearest ink pixel in that column, then each row
takes the lower envelope of the parabolas ``(x - q)**2 + col[q]**2``.
All distances are integers (squared pixels), so results are exact.
"""
from __future__ import annotations

import numpy as np
from numba import njit

NO_INK = np.iinfo(np.int64).max

FIXED_SCALE = "fixed-scale"
MAX_NORMALIZE = "max-normalize"


class NonPositiveSaturation(ValueError):
    pass


@njit(cache=True, nogil=True)
def _column_pass(mask):
    h, w = mask.shape
    # -1 marks a column without any ink
    out = np.empty((h, w), dtype=np.int64)
    for x in range(w):
        last = -1
        for y in range(h):
            if mask[y, x]:
                last = y
            out[y, x] = -1 if last < 0 else y - last
        last = -1
        for y in range(h - 1, -1, -1):
            if mask[y, x]:
                last = y
            if last >= 0:
                d = last - y
                if out[y, x] < 0 or d < out[y, x]:
                    out[y, x] = d
    return out


@njit(cache=True, nogil=True)
def _row_pass(col, no_ink):
    h, w = col.shape
    out = np.empty((h, w), dtype=np.int64)
    for y in range(h):
        f = np.empty(w, dtype=np.int64)
        v = np.empty(w, dtype=np.int64)
        z = np.empty(w + 1, dtype=np.float64)
        k = -1
        for q in range(w):
            g = col[y, q]
            if g < 0:
                continue
            f[q] = g * g
            if k < 0:
                k = 0
                v[0] = q
                z[0] = -np.inf
                z[1] = np.inf
                continue
            # z[0] = -inf, so k never drops below 0
            p = v[k]
            s = ((f[q] + q * q) - (f[p] + p * p)) / (2.0 * (q - p))
            while s <= z[k]:
                k -= 1
                p = v[k]
                s = ((f[q] + q * q) - (f[p] + p * p)) / (2.0 * (q - p))
            k += 1
            v[k] = q
            z[k] = s
            z[k + 1] = np.inf
        if k < 0:
            for x in range(w):
                out[y, x] = no_ink
            continue
        j = 0
        for x in range(w):
            while z[j + 1] < x:
                j += 1
            dx = x - v[j]
            out[y, x] = dx * dx + f[v[j]]
    return out


def edt_exact(mask: np.ndarray) -> np.ndarray:
    """Squared distance from every pixel to the nearest ink pixel.

    Returns an int64 array; every pixel is `NO_INK` if the mask holds no ink.
    """
    mask = np.ascontiguousarray(mask, dtype=np.bool_)
    if mask.ndim != 2 or mask.size == 0:
        raise ValueError("mask must be a non-empty 2-D array")
    return _row_pass(_column_pass(mask), NO_INK)


def edt_bruteforce(mask: np.ndarray, chunk: int = 4096) -> np.ndarray:
    """Direct minimum over all ink pixels. Quadratic; meant as a test oracle."""
    mask = np.asarray(mask, dtype=bool)
    h, w = mask.shape
    iy, ix = np.nonzero(mask)
    if iy.size == 0:
        return np.full((h, w), NO_INK, dtype=np.int64)
    py, px = np.indices((h, w)).reshape(2, -1)
    out = np.empty(h * w, dtype=np.int64)
    iy = iy.astype(np.int64)
    ix = ix.astype(np.int64)
    for start in range(0, h * w, chunk):
        sy = py[start : start + chunk, None]
        sx = px[start : start + chunk, None]
        out[start : start + chunk] = ((sy - iy) ** 2 + (sx - ix) ** 2).min(axis=1)
    return out.reshape(h, w)


def distance_to_gray(dm: np.ndarray, mode: str = FIXED_SCALE, d_sat: float = 8.0) -> np.ndarray:
    """Map squared distances onto 0..255, rounding half up.

    ``fixed-scale`` saturates at ``d_sat`` true pixels, so a gray threshold is
    a fixed dilation radius. ``max-normalize`` divides by the largest finite
    distance on the page. `NO_INK` pixels map to 255 either way.
    """
    dm = np.asarray(dm)
    no_ink = dm == NO_INK
    r = np.sqrt(np.where(no_ink, 0, dm).astype(np.float64))
    if mode == FIXED_SCALE:
        if not d_sat > 0:
            raise NonPositiveSaturation(f"d_sat must be positive, got {d_sat}")
        scaled = 255.0 * np.minimum(r, d_sat) / d_sat
    elif mode == MAX_NORMALIZE:
        r_max = r.max() if r.size else 0.0
        if r_max == 0:
            scaled = np.zeros_like(r)
        else:
            scaled = 255.0 * r / r_max
    else:
        raise ValueError(f"unknown scale mode {mode!r}")
    g = np.clip(np.floor(scaled + 0.5), 0, 255).astype(np.uint8)
    g[no_ink] = 255
    return g
