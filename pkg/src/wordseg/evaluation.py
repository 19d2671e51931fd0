"""Box matching, over/under-segmentation counts and the success rate."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Tuple

import numpy as np

REPORT_KEYS = ("total", "extracted", "over_segmented", "under_segmented", "success_rate")


class ZeroTotal(ValueError):
    pass


@dataclass(frozen=True)
class Matching:
    """``truth_to_pred[i]``: predicted indices covering truth box i.
    ``pred_to_truth[j]``: truth indices covered by predicted box j."""

    truth_to_pred: Tuple[Tuple[int, ...], ...]
    pred_to_truth: Tuple[Tuple[int, ...], ...]


@dataclass(frozen=True)
class EvalReport:
    total_truth: int
    over_segmented: int
    under_segmented: int
    extracted: int
    success_rate: float

    def to_text(self) -> str:
        values = (
            self.total_truth,
            self.extracted,
            self.over_segmented,
            self.under_segmented,
            f"{self.success_rate:.2f}",
        )
        return "".join(f"{k}: {v}\n" for k, v in zip(REPORT_KEYS, values))


def match_boxes(pred: Sequence[Sequence[int]], truth: Sequence[Sequence[int]], cover: float = 0.5) -> Matching:
    """A predicted box covers a truth box when it overlaps at least ``cover``
    of the truth box's area."""
    P = np.asarray(pred, dtype=np.int64).reshape(-1, 4)
    T = np.asarray(truth, dtype=np.int64).reshape(-1, 4)
    dx = np.minimum(T[:, None, 0] + T[:, None, 2], P[None, :, 0] + P[None, :, 2]) - np.maximum(
        T[:, None, 0], P[None, :, 0]
    )
    dy = np.minimum(T[:, None, 1] + T[:, None, 3], P[None, :, 1] + P[None, :, 3]) - np.maximum(
        T[:, None, 1], P[None, :, 1]
    )
    inter = np.clip(dx, 0, None) * np.clip(dy, 0, None)
    area = T[:, 2] * T[:, 3]
    # exact rational comparison: inter / area >= num / den
    num, den = Fraction(cover).limit_denominator(10**6).as_integer_ratio()
    covered = (inter * den >= num * area[:, None]) & (inter > 0)
    t2p = tuple(tuple(int(j) for j in np.flatnonzero(row)) for row in covered)
    p2t = tuple(tuple(int(i) for i in np.flatnonzero(col)) for col in covered.T)
    return Matching(t2p, p2t)


def count_errors(m: Matching) -> Tuple[int, int]:
    """Return ``(over, under)``.

    A truth box covered by two or more predictions is over-segmented. Otherwise
    it is under-segmented when nothing covers it, or when its covering
    prediction also covers another truth box.
    """
    over = under = 0
    for preds in m.truth_to_pred:
        if len(preds) >= 2:
            over += 1
        elif not preds or len(m.pred_to_truth[preds[0]]) >= 2:
            under += 1
    return over, under


def success_rate(total: int, over: int, under: int) -> float:
    """``(T - (O + U)) * 100 / T`` rounded half up to two decimals."""
    if total < 1:
        raise ZeroTotal("total number of truth words must be at least 1")
    if over < 0 or under < 0 or over + under > total:
        raise ValueError("need 0 <= over + under <= total")
    exact = Fraction((total - (over + under)) * 100, total)
    hundredths = (exact * 100 + Fraction(1, 2)).__floor__()
    return hundredths / 100


def evaluate(pred: Sequence[Sequence[int]], truth: Sequence[Sequence[int]], cover: float = 0.5) -> EvalReport:
    over, under = count_errors(match_boxes(pred, truth, cover))
    total = len(truth)
    return EvalReport(total, over, under, total - over - under, success_rate(total, over, under))


def report_from_counts(total: int, over: int, under: int) -> EvalReport:
    return EvalReport(total, over, under, total - over - under, success_rate(total, over, under))


def merge_reports(reports: Sequence[EvalReport]) -> EvalReport:
    """Pool several pages into one report, as for a whole test set."""
    total = sum(r.total_truth for r in reports)
    over = sum(r.over_segmented for r in reports)
    under = sum(r.under_segmented for r in reports)
    return report_from_counts(total, over, under)
