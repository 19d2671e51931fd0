"""Word segmentation of handwritten pages by distance-transform smearing."""
from .evaluation import EvalReport, evaluate, success_rate
from .segmenter import SegConfig, WordBox, segment_page
from .synth import SynthSpec, synth_page

__all__ = [
    "EvalReport",
    "SegConfig",
    "SynthSpec",
    "WordBox",
    "evaluate",
    "segment_page",
    "success_rate",
    "synth_page",
]
