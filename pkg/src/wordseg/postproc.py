"""Repair of under-segmented words: same-line joins and cross-line joins."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from .segmenter import SPLIT_HORIZONTAL, SPLIT_VERTICAL, SegConfig, WordBox, reading_order

MAX_HORIZONTAL_DEPTH = 4


@dataclass(frozen=True)
class PageStats:
    median_word_width: int
    median_word_height: int
    word_count: int


def _lower_median(values: List[int]) -> int:
    values = sorted(values)
    return values[(len(values) - 1) // 2]


def page_stats(words: List[WordBox]) -> PageStats:
    if not words:
        return PageStats(0, 0, 0)
    return PageStats(
        _lower_median([w.bbox.w for w in words]),
        _lower_median([w.bbox.h for w in words]),
        len(words),
    )


def beta_of(word_height: int, beta_factor: float = 0.2) -> int:
    """Half-side of the cut window, ``round(beta_factor * height)``, at least 1."""
    return max(1, int(math.floor(beta_factor * word_height + 0.5)))


def _longest_run_centre(flags: np.ndarray) -> Optional[int]:
    """Centre index of the longest run of True (ties: first run)."""
    best_start, best_len = -1, 0
    i, n = 0, flags.size
    while i < n:
        if not flags[i]:
            i += 1
            continue
        j = i
        while j < n and flags[j]:
            j += 1
        if j - i > best_len:
            best_start, best_len = i, j - i
        i = j
    if best_len == 0:
        return None
    return best_start + best_len // 2


def _piece(word: WordBox, local: np.ndarray, provenance: str) -> Optional[WordBox]:
    ys, xs = np.nonzero(local)
    return WordBox.from_pixels(ys + word.bbox.y, xs + word.bbox.x, provenance)


def split_horizontal_join(
    word: WordBox, stats: PageStats, cfg: SegConfig, _depth: int = 0
) -> List[WordBox]:
    """Split a too-wide word at a column valley, recursively.

    The cut column is searched in the central 80% of the box: the centre of the
    widest ink-free run if there is one, else the leftmost minimum-ink column.
    """
    w = word.bbox.w
    if stats.word_count == 0 or w <= cfg.width_join_factor * stats.median_word_width:
        return [word]
    if _depth >= MAX_HORIZONTAL_DEPTH:
        return [word]
    margin = int(0.1 * w)
    lo, hi = max(1, margin), w - margin
    if lo >= hi:
        return [word]
    band = word.mask[:, lo:hi].sum(axis=0)
    centre = _longest_run_centre(band == 0)
    cut = lo + (centre if centre is not None else int(np.argmin(band)))

    left = np.zeros_like(word.mask)
    left[:, :cut] = word.mask[:, :cut]
    right = word.mask & ~left
    out = []
    for local in (left, right):
        piece = _piece(word, local, SPLIT_HORIZONTAL)
        if piece is not None:
            out.extend(split_horizontal_join(piece, stats, cfg, _depth + 1))
    return out


def _contour(mask: np.ndarray) -> np.ndarray:
    """Ink pixels with at least one background pixel among their 8 neighbours."""
    padded = np.pad(mask, 1, constant_values=False)
    h, w = mask.shape
    interior = np.ones_like(mask)
    for dy in (-1, 0, 1):
        for dx in (-1, 0, 1):
            if dy or dx:
                interior &= padded[1 + dy : 1 + dy + h, 1 + dx : 1 + dx + w]
    return mask & ~interior


def _closest_profile_pair(upper: np.ndarray, lower: np.ndarray) -> Tuple[Tuple[int, int], Tuple[int, int]]:
    """Bottom of the upper set and top of the lower set at the same or nearest
    column, choosing the pair with the smallest vertical separation.

    Points are ``(x, y)`` in local coordinates.
    """
    h = upper.shape[0]
    rows = np.arange(h)[:, None]
    up_cols = np.flatnonzero(upper.any(axis=0))
    lo_cols = np.flatnonzero(lower.any(axis=0))
    up_bottom = np.where(upper, rows, -1).max(axis=0)
    lo_top = np.where(lower, rows, h).min(axis=0)
    best = None
    for xa in up_cols:
        # nearest lower column; ties go left
        k = np.searchsorted(lo_cols, xa)
        cands = [c for c in (lo_cols[k - 1] if k > 0 else None, lo_cols[k] if k < lo_cols.size else None) if c is not None]
        xb = min(cands, key=lambda c: (abs(int(c) - int(xa)), c))
        key = (int(lo_top[xb]) - int(up_bottom[xa]), abs(int(xb) - int(xa)), int(xa))
        if best is None or key < best[0]:
            best = (key, (int(xa), int(up_bottom[xa])), (int(xb), int(lo_top[xb])))
    return best[1], best[2]


def split_vertical_join(word: WordBox, stats: PageStats, cfg: SegConfig) -> List[WordBox]:
    """Separate two words fused across successive lines.

    The word is provisionally split at the emptiest row of its central 60%.
    The nearest pair of facing outline points across that row fixes the centre
    of a square window of half-side ``beta_of(height)``. The closest pair of
    contour points inside the window, one from each part, defines the cut: its
    perpendicular bisector inside the window, continued horizontally from the
    window edges to the sides of the box.
    """
    mask = word.mask
    h, w = mask.shape
    if stats.word_count == 0 or h <= cfg.height_join_factor * stats.median_word_height:
        return [word]
    margin = int(0.2 * h)
    lo, hi = max(1, margin), h - margin
    if lo >= hi:
        return [word]
    band = mask[lo:hi].sum(axis=1)
    split_row = lo + _longest_run_centre(band == band.min())

    above = np.zeros_like(mask)
    above[:split_row] = True
    upper, lower = mask & above, mask & ~above
    if not upper.any() or not lower.any():
        return [word]

    p_top, p_bot = _closest_profile_pair(upper, lower)
    beta = beta_of(h, cfg.beta_factor)
    mx, my = (p_top[0] + p_bot[0]) / 2.0, (p_top[1] + p_bot[1]) / 2.0

    contour = _contour(mask)
    yy, xx = np.indices(mask.shape)
    in_window = (np.abs(xx - mx) <= beta) & (np.abs(yy - my) <= beta)
    uy, ux = np.nonzero(contour & upper & in_window)
    ly, lx = np.nonzero(contour & lower & in_window)
    if uy.size and ly.size:
        d2 = (ux[:, None] - lx[None, :]) ** 2 + (uy[:, None] - ly[None, :]) ** 2
        i, j = np.unravel_index(int(np.argmin(d2)), d2.shape)
        a = (float(ux[i]), float(uy[i]))
        b = (float(lx[j]), float(ly[j]))
    else:
        a, b = (float(p_top[0]), float(p_top[1])), (float(p_bot[0]), float(p_bot[1]))

    dx, dy = b[0] - a[0], b[1] - a[1]
    cx, cy = (a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0
    y_lo, y_hi = my - beta, my + beta

    def bisector_row(x: float) -> float:
        if dy == 0:
            return cy
        return min(max(cy - (x - cx) * dx / dy, y_lo), y_hi)

    # True where a pixel belongs to the upper piece
    side = ((xx - cx) * dx + (yy - cy) * dy) < 0
    side = np.where(yy < y_lo, True, np.where(yy > y_hi, False, side))
    side = np.where(xx < mx - beta, yy < bisector_row(mx - beta), side)
    side = np.where(xx > mx + beta, yy < bisector_row(mx + beta), side)

    top_piece = _piece(word, mask & side, SPLIT_VERTICAL)
    bottom_piece = _piece(word, mask & ~side, SPLIT_VERTICAL)
    if top_piece is None or bottom_piece is None:
        return [word]
    return [top_piece, bottom_piece]


def repair(words: List[WordBox], cfg: SegConfig) -> List[WordBox]:
    """Split oversized words until no further split applies.

    Each pass recomputes the page statistics, then runs the cross-line split
    followed by the same-line split on every word. Iterating to a fixed point
    makes the result idempotent.
    """
    current = reading_order(words)
    while True:
        stats = page_stats(current)
        out = []
        for word in current:
            for part in split_vertical_join(word, stats, cfg):
                out.extend(split_horizontal_join(part, stats, cfg))
        out = reading_order(out)
        if len(out) == len(current):
            return out
        current = out
