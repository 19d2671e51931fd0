"""Connected-component labeling and per-component statistics."""
from __future__ import annotations

from dataclasses import dataclass
from typing import FrozenSet, List

import numpy as np
from numba import njit

from .raster import Box

LEFT, RIGHT, TOP, BOTTOM = "left", "right", "top", "bottom"


@dataclass(frozen=True)
class LabelMap:
    """Per-pixel labels (0 = background, 1..n = components)."""

    labels: np.ndarray
    n: int

    @property
    def shape(self):
        return self.labels.shape


@dataclass(frozen=True)
class Component:
    label: int
    bbox: Box
    pixel_count: int
    touches: FrozenSet[str]


@njit(cache=True, nogil=True)
def _find(parent, i):
    root = i
    while parent[root] != root:
        root = parent[root]
    while parent[i] != root:
        nxt = parent[i]
        parent[i] = root
        i = nxt
    return root


@njit(cache=True, nogil=True)
def _union(parent, a, b):
    ra = _find(parent, a)
    rb = _find(parent, b)
    if ra < rb:
        parent[rb] = ra
    elif rb < ra:
        parent[ra] = rb


@njit(cache=True, nogil=True)
def _two_pass(mask, eight):
    h, w = mask.shape
    prov = np.zeros((h, w), dtype=np.int64)
    # provisional label 0 is unused; worst case one label per pixel
    parent = np.empty(h * w + 1, dtype=np.int64)
    parent[0] = 0
    nxt = 1
    for y in range(h):
        for x in range(w):
            if not mask[y, x]:
                continue
            cur = 0
            # already-visited neighbours: W, NW, N, NE (diagonals only for 8)
            for k in range(4):
                if k == 0:
                    ny, nx = y, x - 1
                elif k == 1:
                    if not eight:
                        continue
                    ny, nx = y - 1, x - 1
                elif k == 2:
                    ny, nx = y - 1, x
                else:
                    if not eight:
                        continue
                    ny, nx = y - 1, x + 1
                if ny < 0 or nx < 0 or nx >= w:
                    continue
                lab = prov[ny, nx]
                if lab == 0:
                    continue
                if cur == 0:
                    cur = lab
                else:
                    _union(parent, cur, lab)
            if cur == 0:
                parent[nxt] = nxt
                cur = nxt
                nxt += 1
            prov[y, x] = cur
    # final labels in raster order of first encounter
    final = np.zeros(nxt, dtype=np.int64)
    n = 0
    out = np.zeros((h, w), dtype=np.int32)
    for y in range(h):
        for x in range(w):
            lab = prov[y, x]
            if lab == 0:
                continue
            root = _find(parent, lab)
            if final[root] == 0:
                n += 1
                final[root] = n
            out[y, x] = final[root]
    return out, n


def label_components(mask: np.ndarray, connectivity: int = 8) -> LabelMap:
    """Two-pass union-find labeling; labels follow raster order of first pixel."""
    if connectivity not in (4, 8):
        raise ValueError(f"connectivity must be 4 or 8, got {connectivity}")
    mask = np.ascontiguousarray(mask, dtype=np.bool_)
    if mask.ndim != 2 or mask.size == 0:
        raise ValueError("mask must be a non-empty 2-D array")
    labels, n = _two_pass(mask, connectivity == 8)
    return LabelMap(labels, int(n))


def component_stats(lm: LabelMap) -> List[Component]:
    h, w = lm.labels.shape
    if lm.n == 0:
        return []
    flat = lm.labels.ravel()
    counts = np.bincount(flat, minlength=lm.n + 1)
    ys, xs = np.divmod(np.arange(flat.size), w)
    sel = flat > 0
    lab, ys, xs = flat[sel], ys[sel], xs[sel]
    big = np.iinfo(np.int64).max
    x0 = np.full(lm.n + 1, big, dtype=np.int64)
    y0 = np.full(lm.n + 1, big, dtype=np.int64)
    x1 = np.full(lm.n + 1, -1, dtype=np.int64)
    y1 = np.full(lm.n + 1, -1, dtype=np.int64)
    np.minimum.at(x0, lab, xs)
    np.minimum.at(y0, lab, ys)
    np.maximum.at(x1, lab, xs)
    np.maximum.at(y1, lab, ys)
    comps = []
    for i in range(1, lm.n + 1):
        bx, by, ex, ey = int(x0[i]), int(y0[i]), int(x1[i]), int(y1[i])
        touches = set()
        if bx == 0:
            touches.add(LEFT)
        if ex == w - 1:
            touches.add(RIGHT)
        if by == 0:
            touches.add(TOP)
        if ey == h - 1:
            touches.add(BOTTOM)
        comps.append(
            Component(i, Box(bx, by, ex - bx + 1, ey - by + 1), int(counts[i]), frozenset(touches))
        )
    return comps
