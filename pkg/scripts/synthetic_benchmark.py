#!/usr/bin/env python3
"""Score the pipeline on a batch of synthetic pages and print the pooled report.

    python scripts/synthetic_benchmark.py --pages 50 --first-seed 1000
"""
import argparse
import time

from wordseg.evaluation import evaluate, merge_reports
from wordseg.segmenter import SegConfig, segment_page
from wordseg.synth import SynthSpec, synth_page


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--pages", type=int, default=50)
    ap.add_argument("--first-seed", type=int, default=1000)
    ap.add_argument("--alpha", type=int, default=160)
    ap.add_argument("--d-sat", type=float, default=8.0)
    ap.add_argument("--scale-mode", default="fixed-scale", choices=["fixed-scale", "max-normalize"])
    ap.add_argument("--no-repair", action="store_true")
    args = ap.parse_args()

    cfg = SegConfig(alpha=args.alpha, d_sat=args.d_sat, scale_mode=args.scale_mode)
    reports = []
    start = time.perf_counter()
    for seed in range(args.first_seed, args.first_seed + args.pages):
        img, truth = synth_page(SynthSpec(seed=seed))
        result = segment_page(img, cfg, repair=not args.no_repair)
        reports.append(evaluate(result.boxes, truth))
    pooled = merge_reports(reports)
    print(f"pages: {args.pages}")
    print(pooled.to_text(), end="")
    print(f"elapsed_s: {time.perf_counter() - start:.1f}")


if __name__ == "__main__":
    main()
