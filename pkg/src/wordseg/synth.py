"""Deterministic synthetic handwriting-like pages with exact word boxes.

Randomness comes from xorshift64* seeded through splitmix64, both of which are
fully specified below so pages can be regenerated bit-for-bit anywhere:

    splitmix64(x):
        x = x + 0x9E3779B97F4A7C15            (mod 2**64)
        z = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9
        z = (z ^ (z >> 27)) * 0x94D049BB133111EB
        return z ^ (z >> 31)

    xorshift64*: state = splitmix64(seed) (0 is replaced by 0x9E3779B97F4A7C15)
        x ^= x >> 12; x ^= x << 25; x ^= x >> 27
        return x * 0x2545F4914F6CDD1D         (mod 2**64)

    randint(lo, hi) = lo + next() % (hi - lo + 1)
    chance(p)       = next() < floor(p * 2**64)

Salt noise does not consume the sequential stream per pixel: one draw gives a
key, and pixel ``i`` (row-major) flips when ``splitmix64(key + i) <
floor(p * 2**64)``.
"""
from __future__ import annotations

from dataclasses import dataclass, fields
from typing import List, Tuple

import numpy as np

from .raster import Box

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


class LayoutOverflow(ValueError):
    pass


def splitmix64(x: int) -> int:
    x = (x + GOLDEN) & MASK64
    z = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def splitmix64_array(x: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore"):
        x = x.astype(np.uint64) + np.uint64(GOLDEN)
        z = (x ^ (x >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        return z ^ (z >> np.uint64(31))


class XorShift64Star:
    def __init__(self, seed: int):
        self.state = splitmix64(seed & MASK64) or GOLDEN

    def next(self) -> int:
        x = self.state
        x ^= x >> 12
        x ^= (x << 25) & MASK64
        x ^= x >> 27
        self.state = x
        return (x * 0x2545F4914F6CDD1D) & MASK64

    def randint(self, lo: int, hi: int) -> int:
        if hi < lo:
            raise ValueError(f"empty range [{lo}, {hi}]")
        return lo + self.next() % (hi - lo + 1)

    def chance(self, p: float) -> bool:
        return self.next() < probability_threshold(p)


def probability_threshold(p: float) -> int:
    return int(min(max(p, 0.0), 1.0) * 2.0**64)


Range = Tuple[int, int]


@dataclass
class SynthSpec:
    page: Tuple[int, int] = (1400, 600)
    lines: int = 10
    words_per_line: Range = (14, 16)
    chars_per_word: Range = (3, 5)
    char_size: Range = (8, 12)
    intra_word_gap: Range = (1, 3)
    inter_word_gap: Range = (14, 20)
    line_gap: Range = (22, 28)
    jitter: int = 2
    stroke_gray: int = 40
    noise_salt_prob: float = 0.01
    seed: int = 0
    margin: int = 20
    stub_prob: float = 0.2
    stub_len: Range = (2, 4)

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if isinstance(v, (tuple, list)):
                v = tuple(int(x) for x in v)
                setattr(self, f.name, v)
                if f.name != "page" and v[0] > v[1]:
                    raise ValueError(f"{f.name}: empty range {v}")
        if self.page[0] < 1 or self.page[1] < 1:
            raise ValueError("page dimensions must be positive")
        if min(self.words_per_line[0], self.chars_per_word[0], self.char_size[0]) < 1:
            raise ValueError("word, character and size ranges must start at 1 or more")
        if self.intra_word_gap[0] < 0 or self.stub_len[0] < 0 or self.jitter < 0:
            raise ValueError("gaps, stub lengths and jitter must be non-negative")
        if self.intra_word_gap[1] >= self.inter_word_gap[0]:
            raise ValueError("max intra-word gap must be below min inter-word gap")
        if not 0 <= self.stroke_gray < 255:
            raise ValueError("stroke_gray must lie in [0, 254]")


def _draw_glyph(word: np.ndarray, rng: XorShift64Star, spec: SynthSpec, x: int, cw: int, top: int, body: int):
    bottom = top + body
    word[top:bottom, x : x + cw] = True
    for _ in range(rng.randint(0, 2)):
        nw = rng.randint(1, max(1, cw // 3))
        nd = rng.randint(1, max(1, body // 3))
        from_top = rng.chance(0.5)
        if cw - nw - 1 < 1:
            continue
        nx = x + rng.randint(1, cw - nw - 1)
        if from_top:
            word[top : top + nd, nx : nx + nw] = False
        else:
            word[bottom - nd : bottom, nx : nx + nw] = False
    sw = min(2, cw)
    if rng.chance(spec.stub_prob):
        length = rng.randint(*spec.stub_len)
        sx = x + rng.randint(0, cw - sw)
        word[top - length : top + body // 2, sx : sx + sw] = True
    if rng.chance(spec.stub_prob):
        length = rng.randint(*spec.stub_len)
        sx = x + rng.randint(0, cw - sw)
        word[bottom - body // 2 : bottom + length, sx : sx + sw] = True


def synth_page(spec: SynthSpec) -> Tuple[np.ndarray, List[Box]]:
    """Render a page and return ``(gray image, word boxes)``.

    Boxes are the tight bounding boxes of each word's ink before noise.
    """
    width, height = spec.page
    rng = XorShift64Star(spec.seed)
    ink = np.zeros((height, width), dtype=bool)
    boxes: List[Box] = []
    stub = spec.stub_len[1]
    body_max = spec.char_size[1]
    band = 2 * spec.jitter + 2 * stub + body_max
    y = spec.margin
    for line in range(spec.lines):
        if line:
            y += rng.randint(*spec.line_gap)
        if y + band > height - spec.margin:
            raise LayoutOverflow(f"line {line} does not fit in page height {height}")
        baseline = y + spec.jitter + stub + body_max
        x = spec.margin
        for w in range(rng.randint(*spec.words_per_line)):
            if w:
                x += rng.randint(*spec.inter_word_gap)
            body = rng.randint(*spec.char_size)
            bottom = baseline + rng.randint(-spec.jitter, spec.jitter)
            top = bottom - body
            word = np.zeros((height, width), dtype=bool)
            x0 = x
            for c in range(rng.randint(*spec.chars_per_word)):
                if c:
                    x += rng.randint(*spec.intra_word_gap)
                cw = rng.randint(*spec.char_size)
                if x + cw > width - spec.margin:
                    raise LayoutOverflow(f"line {line} word {w} does not fit in page width {width}")
                _draw_glyph(word, rng, spec, x, cw, top, body)
                x += cw
            region = word[:, x0:x]
            ys, xs = np.nonzero(region)
            boxes.append(Box(x0 + int(xs.min()), int(ys.min()), int(np.ptp(xs)) + 1, int(np.ptp(ys)) + 1))
            ink[:, x0:x] |= region
        y += band

    img = np.where(ink, np.uint8(spec.stroke_gray), np.uint8(255)).astype(np.uint8)
    if spec.noise_salt_prob > 0:
        key = rng.next()
        idx = np.arange(width * height, dtype=np.uint64) + np.uint64(key)
        flip = (splitmix64_array(idx) < np.uint64(min(probability_threshold(spec.noise_salt_prob), MASK64))).reshape(
            height, width
        )
        img = np.where(flip, np.where(ink, np.uint8(255), np.uint8(spec.stroke_gray)), img).astype(np.uint8)
    return img, boxes
