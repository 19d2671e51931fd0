#!/usr/bin/env python3
"""Success rate and over/under-segmentation counts as alpha varies.

Prints one row per alpha for each saturation distance, which shows how wide
the usable alpha band is for a given page scale.
"""
import argparse

from wordseg.evaluation import evaluate, merge_reports
from wordseg.segmenter import SegConfig, segment_page
from wordseg.synth import SynthSpec, synth_page


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--pages", type=int, default=5)
    ap.add_argument("--d-sat", type=float, nargs="+", default=[8.0, 12.0, 24.0])
    ap.add_argument("--alphas", type=int, nargs="+", default=list(range(40, 256, 20)))
    args = ap.parse_args()

    pages = [synth_page(SynthSpec(seed=3000 + i)) for i in range(args.pages)]
    print(f"{'d_sat':>6} {'alpha':>5} {'radius':>7} {'O':>5} {'U':>5} {'success':>8}")
    for d_sat in args.d_sat:
        for alpha in args.alphas:
            cfg = SegConfig(alpha=alpha, d_sat=d_sat)
            reports = [evaluate(segment_page(img, cfg).boxes, truth) for img, truth in pages]
            r = merge_reports(reports)
            radius = (alpha + 0.5) * d_sat / 255
            print(
                f"{d_sat:6.1f} {alpha:5d} {radius:7.2f} {r.over_segmented:5d} "
                f"{r.under_segmented:5d} {r.success_rate:8.2f}"
            )


if __name__ == "__main__":
    main()
