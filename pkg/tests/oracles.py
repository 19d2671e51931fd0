"""Independent slow reference implementations used only by the tests."""
import math

import numpy as np


def flood_fill_labels(mask, connectivity):
    """Stack-based flood fill; labels in raster order of first pixel."""
    mask = np.asarray(mask, dtype=bool)
    h, w = mask.shape
    if connectivity == 8:
        steps = [(dy, dx) for dy in (-1, 0, 1) for dx in (-1, 0, 1) if dy or dx]
    else:
        steps = [(-1, 0), (1, 0), (0, -1), (0, 1)]
    labels = np.zeros((h, w), dtype=np.int64)
    n = 0
    for y in range(h):
        for x in range(w):
            if not mask[y, x] or labels[y, x]:
                continue
            n += 1
            labels[y, x] = n
            stack = [(y, x)]
            while stack:
                cy, cx = stack.pop()
                for dy, dx in steps:
                    ny, nx = cy + dy, cx + dx
                    if 0 <= ny < h and 0 <= nx < w and mask[ny, nx] and not labels[ny, nx]:
                        labels[ny, nx] = n
                        stack.append((ny, nx))
    return labels, n


def same_partition(a, b):
    """True when two label images induce the same partition of their pixels."""
    a = np.asarray(a).ravel()
    b = np.asarray(b).ravel()
    if not np.array_equal(a > 0, b > 0):
        return False
    pairs = set(zip(a[a > 0].tolist(), b[b > 0].tolist()))
    left = {p[0] for p in pairs}
    right = {p[1] for p in pairs}
    return len(pairs) == len(left) == len(right)


def conv2d_direct(img, sigma):
    """Non-separable 2-D Gaussian convolution with edge replication."""
    r = int(math.ceil(3 * sigma))
    taps = [math.exp(-(i * i) / (2 * sigma * sigma)) for i in range(-r, r + 1)]
    total = sum(taps)
    taps = [t / total for t in taps]
    h, w = img.shape
    out = np.zeros((h, w))
    for y in range(h):
        for x in range(w):
            acc = 0.0
            for i, ky in enumerate(taps):
                yy = min(max(y + i - r, 0), h - 1)
                for j, kx in enumerate(taps):
                    xx = min(max(x + j - r, 0), w - 1)
                    acc += ky * kx * float(img[yy, xx])
            out[y, x] = acc
    return np.clip(np.floor(out + 0.5), 0, 255).astype(np.uint8)


def otsu_scan(img):
    """Exhaustive float scan of between-class variance over t = 1..255."""
    values = np.asarray(img, dtype=np.float64).ravel()
    best_t, best_var = None, -1.0
    for t in range(1, 256):
        lo = values[values < t]
        hi = values[values >= t]
        if lo.size == 0 or hi.size == 0:
            continue
        w0 = lo.size / values.size
        w1 = hi.size / values.size
        var = w0 * w1 * (lo.mean() - hi.mean()) ** 2
        if var > best_var * (1 + 1e-12):
            best_t, best_var = t, var
    return best_t


def luminance_scalar(r, g, b):
    return math.floor(0.299 * r + 0.587 * g + 0.114 * b + 0.5 + 1e-9)


def random_mask(rng, max_side=64):
    h, w = (int(v) for v in rng.integers(1, max_side + 1, size=2))
    density = float(rng.random())
    return rng.random((h, w)) < density
