"""Command-line entry point: ``segment``, ``eval`` and ``synth``.

Exit codes: 0 success, 1 bad arguments, 2 I/O failure, 3 malformed input.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np

from . import config, raster
from .evaluation import evaluate
from .segmenter import PageResult, SegConfig, segment_page
from .synth import LayoutOverflow, SynthSpec, synth_page

EXIT_OK, EXIT_ARGS, EXIT_IO, EXIT_MALFORMED = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_ARGS)


@dataclass
class PageOutputs:
    input: str
    words: List[str] = field(default_factory=list)
    boxes: Optional[str] = None
    overlay: Optional[str] = None
    timings_ms: Dict[str, float] = field(default_factory=dict)


@dataclass
class RunManifest:
    inputs: List[str]
    config: dict
    pages: List[PageOutputs] = field(default_factory=list)


def thread_count() -> int:
    raw = os.environ.get("WSEG_THREADS", "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"WSEG_THREADS must be an integer, got {raw!r}")
    if n < 0:
        raise UsageError("WSEG_THREADS must be non-negative")
    return n or (os.cpu_count() or 1)


def word_crop(gray: np.ndarray, word) -> np.ndarray:
    x, y, w, h = word.bbox
    return np.where(word.mask, gray[y : y + h, x : x + w], np.uint8(255)).astype(np.uint8)


def _resolve_config(args) -> SegConfig:
    cfg = SegConfig()
    if args.config:
        try:
            text = Path(args.config).read_text()
        except OSError as exc:
            raise OSError(f"cannot read config {args.config}: {exc.strerror}") from exc
        cfg = config.seg_config_from_text(text, cfg)
    overrides = {}
    for flag, key in (
        ("alpha", "alpha"),
        ("sigma", "sigma"),
        ("d_sat", "d_sat"),
        ("scale_mode", "scale_mode"),
        ("beta", "beta_factor"),
    ):
        value = getattr(args, flag)
        if value is not None:
            overrides[key] = str(value)
    return config.seg_config_from_mapping(overrides, cfg)


def _segment_one(path: str, out_dir: Path, cfg: SegConfig, overlay: Optional[str], boxes: Optional[str]):
    t = time.perf_counter()
    gray = raster.load_gray(path)
    load_ms = (time.perf_counter() - t) * 1e3
    result: PageResult = segment_page(gray, cfg)
    page = PageOutputs(input=path, timings_ms={"load": load_ms, **result.timings_ms})

    t = time.perf_counter()
    out_dir.mkdir(parents=True, exist_ok=True)
    for i, word in enumerate(result.words, start=1):
        name = out_dir / f"word_{i:04d}.pgm"
        raster.save_gray(word_crop(gray, word), name)
        page.words.append(str(name))
    if boxes:
        raster.write_truth(result.boxes, boxes)
        page.boxes = str(boxes)
    if overlay:
        raster.save_rgb(raster.render_overlay(gray, result.boxes), overlay)
        page.overlay = str(overlay)
    page.timings_ms["write"] = (time.perf_counter() - t) * 1e3
    return page


def cmd_segment(args) -> int:
    cfg = _resolve_config(args)
    workers = thread_count()
    out = Path(args.out)
    inputs = list(args.input)
    batch = len(inputs) > 1
    for path in inputs:
        if not os.path.isfile(path):
            print(f"wordseg: cannot read input image: {path}", file=sys.stderr)
            return EXIT_IO
    jobs = []
    for path in inputs:
        if batch:
            page_dir = out / Path(path).stem
            overlay = str(page_dir / args.overlay) if args.overlay else None
            boxes = str(page_dir / args.boxes) if args.boxes else None
        else:
            page_dir, overlay, boxes = out, args.overlay, args.boxes
        jobs.append((path, page_dir, cfg, overlay, boxes))
    if batch and len({j[1] for j in jobs}) != len(jobs):
        raise UsageError("batch inputs must have distinct file stems")

    if workers > 1 and batch:
        with ThreadPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
            pages = list(pool.map(lambda j: _segment_one(*j), jobs))
    else:
        pages = [_segment_one(*j) for j in jobs]

    manifest = RunManifest(inputs=inputs, config=cfg.as_dict(), pages=pages)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "manifest.json", "w") as fh:
        json.dump(asdict(manifest), fh, indent=2)
    for page in pages:
        print(f"{page.input}: {len(page.words)} words")
    return EXIT_OK


def cmd_eval(args) -> int:
    pred = raster.read_truth(args.pred)
    truth = raster.read_truth(args.truth)
    if not truth:
        raise UsageError("truth file lists no words")
    report = evaluate(pred, truth, args.cover)
    text = report.to_text()
    if args.report:
        with open(args.report, "w") as fh:
            fh.write(text)
    sys.stdout.write(text)
    return EXIT_OK


def cmd_synth(args) -> int:
    if args.spec:
        spec = config.synth_spec_from_text(Path(args.spec).read_text())
    else:
        spec = SynthSpec()
    if args.seed is not None:
        spec.seed = args.seed
    img, boxes = synth_page(spec)
    raster.save_gray(img, args.out_image)
    raster.write_truth(boxes, args.out_truth)
    print(f"{args.out_image}: {len(boxes)} words")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wordseg", description="Page-to-word segmentation by distance-transform smearing.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    seg = sub.add_parser("segment", help="segment page images into word crops")
    seg.add_argument("--input", required=True, nargs="+", help="P5/P6 page image(s)")
    seg.add_argument("--out", required=True, help="output directory for word crops")
    seg.add_argument("--alpha", type=int)
    seg.add_argument("--sigma", type=float)
    seg.add_argument("--d-sat", dest="d_sat", type=float)
    seg.add_argument("--scale-mode", dest="scale_mode", choices=["fixed", "max"])
    seg.add_argument("--beta", type=float, help="beta factor (fraction of word height)")
    seg.add_argument("--overlay", help="write a red-box overlay PPM here")
    seg.add_argument("--boxes", help="write predicted boxes (WSGT 1) here")
    seg.add_argument("--config", help="flat 'key = value' config file")
    seg.set_defaults(func=cmd_segment)

    ev = sub.add_parser("eval", help="score predicted boxes against ground truth")
    ev.add_argument("--pred", required=True)
    ev.add_argument("--truth", required=True)
    ev.add_argument("--report")
    ev.add_argument("--cover", type=float, default=0.5, help="coverage ratio for a match")
    ev.set_defaults(func=cmd_eval)

    sy = sub.add_parser("synth", help="generate a synthetic page and its ground truth")
    sy.add_argument("--spec")
    sy.add_argument("--seed", type=int)
    sy.add_argument("--out-image", dest="out_image", required=True)
    sy.add_argument("--out-truth", dest="out_truth", required=True)
    sy.set_defaults(func=cmd_synth)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, config.ConfigError, LayoutOverflow) as exc:
        print(f"wordseg: {exc}", file=sys.stderr)
        return EXIT_ARGS
    except raster.RasterError as exc:
        print(f"wordseg: malformed input: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except OSError as exc:
        name = getattr(exc, "filename", None)
        detail = f"{name}: {exc.strerror}" if name else str(exc)
        print(f"wordseg: I/O failure: {detail}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
