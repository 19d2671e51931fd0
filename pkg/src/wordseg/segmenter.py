"""Distance-transform smearing and word extraction."""
from __future__ import annotations

import time
from dataclasses import dataclass, field, fields
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from . import ccl, edt, preprocess
from .raster import Box

DIRECT = "direct"
BORDER_SLICED = "border-sliced"
SPLIT_HORIZONTAL = "split-horizontal"
SPLIT_VERTICAL = "split-vertical"
PROVENANCES = (DIRECT, BORDER_SLICED, SPLIT_HORIZONTAL, SPLIT_VERTICAL)


class DimensionMismatch(ValueError):
    pass


@dataclass
class SegConfig:
    sigma: float = 1.0
    alpha: int = 160
    scale_mode: str = edt.FIXED_SCALE
    d_sat: float = 8.0
    beta_factor: float = 0.2
    width_join_factor: float = 1.8
    height_join_factor: float = 1.6
    valley_thickness_factor: float = 0.1
    min_word_pixels: int = 15
    # None selects Otsu; an int fixes the ink threshold (ink = gray < threshold)
    ink_threshold: Optional[int] = None

    def __post_init__(self):
        if not 0 <= self.alpha <= 255:
            raise ValueError(f"alpha must lie in [0, 255], got {self.alpha}")
        if self.scale_mode not in (edt.FIXED_SCALE, edt.MAX_NORMALIZE):
            raise ValueError(f"unknown scale_mode {self.scale_mode!r}")
        for name in (
            "sigma",
            "d_sat",
            "beta_factor",
            "width_join_factor",
            "height_join_factor",
            "valley_thickness_factor",
        ):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        if self.min_word_pixels < 1:
            raise ValueError("min_word_pixels must be at least 1")
        if self.ink_threshold is not None and not 0 <= self.ink_threshold <= 256:
            raise ValueError("ink_threshold must lie in [0, 256]")

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass(eq=False)
class WordBox:
    """A word: tight bbox in page coordinates plus its own ink inside that bbox."""

    bbox: Box
    mask: np.ndarray
    provenance: str = DIRECT

    @classmethod
    def from_page_mask(cls, page_mask: np.ndarray, provenance: str = DIRECT) -> Optional["WordBox"]:
        ys, xs = np.nonzero(page_mask)
        return cls.from_pixels(ys, xs, provenance)

    @classmethod
    def from_pixels(cls, ys, xs, provenance: str = DIRECT) -> Optional["WordBox"]:
        if len(ys) == 0:
            return None
        y0, x0 = int(ys.min()), int(xs.min())
        h, w = int(ys.max()) - y0 + 1, int(xs.max()) - x0 + 1
        mask = np.zeros((h, w), dtype=bool)
        mask[ys - y0, xs - x0] = True
        return cls(Box(x0, y0, w, h), mask, provenance)

    def pixels(self) -> Tuple[np.ndarray, np.ndarray]:
        """Page coordinates (ys, xs) of the word's ink."""
        ys, xs = np.nonzero(self.mask)
        return ys + self.bbox.y, xs + self.bbox.x

    @property
    def pixel_count(self) -> int:
        return int(self.mask.sum())

    def __eq__(self, other):
        if not isinstance(other, WordBox):
            return NotImplemented
        return (
            self.bbox == other.bbox
            and self.provenance == other.provenance
            and np.array_equal(self.mask, other.mask)
        )

    __hash__ = None


def reading_order(words: Iterable[WordBox]) -> List[WordBox]:
    return sorted(words, key=lambda wb: (wb.bbox.y, wb.bbox.x, wb.bbox.h, wb.bbox.w))


def smear(gray_dt: np.ndarray, alpha: int) -> np.ndarray:
    return np.asarray(gray_dt) <= alpha


def detect_border_component(
    comps: Sequence[ccl.Component], page: Tuple[int, int], span: float = 0.9
) -> Optional[int]:
    """Label of the component touching >= 3 borders and spanning the page.

    ``page`` is ``(width, height)``. If several qualify the largest (then the
    lowest label) wins.
    """
    width, height = page
    best = None
    for c in comps:
        if len(c.touches) < 3:
            continue
        if c.bbox.w < span * width or c.bbox.h < span * height:
            continue
        if best is None or c.pixel_count > best.pixel_count:
            best = c
    return None if best is None else best.label


def _valley_centres(thickness: np.ndarray, factor: float) -> List[int]:
    occupied = np.nonzero(thickness > 0)[0]
    if occupied.size == 0:
        return []
    limit = factor * float(np.median(thickness[occupied]))
    first, last = int(occupied[0]), int(occupied[-1])
    low = thickness[first : last + 1] <= limit
    centres = []
    i = 0
    n = low.size
    while i < n:
        if not low[i]:
            i += 1
            continue
        j = i
        while j < n and low[j]:
            j += 1
        # runs at either end of the component are tails, not valleys
        if i > 0 and j < n:
            centres.append(first + i + (j - i - 1) // 2)
        i = j
    return centres


def slice_border_component(mask: np.ndarray, cfg: SegConfig) -> List[np.ndarray]:
    """Cut one component along the centres of its thickness valleys.

    Column (row) thickness is the number of component pixels in that column
    (row). A valley is a maximal interior run whose thickness is at most
    ``valley_thickness_factor`` times the median non-zero thickness.
    """
    mask = np.asarray(mask, dtype=bool)
    cols = _valley_centres(mask.sum(axis=0), cfg.valley_thickness_factor)
    rows = _valley_centres(mask.sum(axis=1), cfg.valley_thickness_factor)
    if not cols and not rows:
        return [mask]
    cut = mask.copy()
    cut[:, cols] = False
    cut[rows, :] = False
    lm = ccl.label_components(cut, 8)
    counts = np.bincount(lm.labels.ravel(), minlength=lm.n + 1)
    return [lm.labels == i for i in range(1, lm.n + 1) if counts[i] >= cfg.min_word_pixels]


def extract_words(
    ink: np.ndarray,
    smear_labels: ccl.LabelMap,
    cfg: SegConfig,
    sliced: Iterable[int] = (),
) -> List[WordBox]:
    """Group the original ink pixels by the smeared region that covers them."""
    ink = np.asarray(ink, dtype=bool)
    if ink.shape != smear_labels.labels.shape:
        raise DimensionMismatch(f"ink {ink.shape} vs labels {smear_labels.labels.shape}")
    sliced = set(sliced)
    ys, xs = np.nonzero(ink)
    labs = smear_labels.labels[ys, xs]
    keep = labs > 0
    ys, xs, labs = ys[keep], xs[keep], labs[keep]
    order = np.argsort(labs, kind="stable")
    ys, xs, labs = ys[order], xs[order], labs[order]
    bounds = np.flatnonzero(np.diff(labs)) + 1
    words = []
    for gy, gx, gl in zip(np.split(ys, bounds), np.split(xs, bounds), np.split(labs, bounds)):
        if gy.size < cfg.min_word_pixels:
            continue
        prov = BORDER_SLICED if int(gl[0]) in sliced else DIRECT
        words.append(WordBox.from_pixels(gy, gx, prov))
    return reading_order(words)


def ink_mask(gray: np.ndarray, cfg: SegConfig) -> np.ndarray:
    blurred = preprocess.gaussian_blur(gray, cfg.sigma)
    if cfg.ink_threshold is None:
        return preprocess.binarize_otsu(blurred)
    return preprocess.binarize_fixed(blurred, cfg.ink_threshold)


@dataclass
class PageResult:
    words: List[WordBox]
    ink: np.ndarray
    smeared: np.ndarray
    timings_ms: Dict[str, float] = field(default_factory=dict)

    @property
    def boxes(self) -> List[Box]:
        return [w.bbox for w in self.words]


def smear_labels(ink: np.ndarray, cfg: SegConfig) -> Tuple[np.ndarray, ccl.LabelMap, set]:
    """Smeared mask and its labels, with any border mega-component sliced apart.

    Returns ``(smeared, labels, sliced_label_ids)``.
    """
    dm = edt.edt_exact(ink)
    gray_dt = edt.distance_to_gray(dm, cfg.scale_mode, cfg.d_sat)
    smeared = smear(gray_dt, cfg.alpha)
    lm = ccl.label_components(smeared, 8)
    h, w = smeared.shape
    border = detect_border_component(ccl.component_stats(lm), (w, h))
    if border is None:
        return smeared, lm, set()
    region = lm.labels == border
    pieces = slice_border_component(region, cfg)
    labels = lm.labels.copy()
    labels[region] = 0
    sliced = set()
    nxt = lm.n
    for piece in pieces:
        nxt += 1
        labels[piece] = nxt
        sliced.add(nxt)
    return smeared, ccl.LabelMap(labels, nxt), sliced


def segment_page(gray: np.ndarray, cfg: Optional[SegConfig] = None, repair: bool = True) -> PageResult:
    """Run the whole page-to-words pipeline on a gray page."""
    from .postproc import repair as repair_words

    cfg = cfg or SegConfig()
    timings = {}

    t = time.perf_counter()
    ink = ink_mask(gray, cfg)
    timings["preprocess"] = (time.perf_counter() - t) * 1e3

    t = time.perf_counter()
    smeared, lm, sliced = smear_labels(ink, cfg)
    timings["smear"] = (time.perf_counter() - t) * 1e3

    t = time.perf_counter()
    words = extract_words(ink, lm, cfg, sliced)
    timings["extract"] = (time.perf_counter() - t) * 1e3

    if repair:
        t = time.perf_counter()
        words = repair_words(words, cfg)
        timings["repair"] = (time.perf_counter() - t) * 1e3
    return PageResult(words, ink, smeared, timings)
