"""Raster containers, netpbm I/O, ground-truth sidecars and overlays.

Images are plain numpy arrays: a gray image is ``uint8`` of shape
``(height, width)``, an RGB image is ``uint8`` of shape ``(height, width, 3)``
and an ink mask is ``bool`` of shape ``(height, width)``.
"""
from __future__ import annotations

import os
from typing import Iterable, List, NamedTuple, Sequence

import numpy as np

TRUTH_MAGIC = "WSGT 1"
_WHITESPACE = b" \t\n\r\v\f"


class RasterError(ValueError):
    """Base class for malformed raster or sidecar input."""


class MalformedHeader(RasterError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


class UnsupportedMaxval(RasterError):
    def __init__(self, maxval: int, offset: int):
        super().__init__(f"unsupported maxval {maxval}, only 255 is accepted (byte offset {offset})")
        self.maxval = maxval
        self.offset = offset


class TruncatedData(RasterError):
    def __init__(self, expected: int, got: int, offset: int):
        super().__init__(
            f"pixel data truncated: expected {expected} bytes, found {got} (byte offset {offset})"
        )
        self.offset = offset


class BadMagic(RasterError):
    pass


class BadLine(RasterError):
    def __init__(self, line_number: int, text: str):
        super().__init__(f"line {line_number}: cannot parse box from {text!r}")
        self.line_number = line_number


class BoxOutOfBounds(RasterError):
    def __init__(self, index: int):
        super().__init__(f"box {index} lies outside the image")
        self.index = index


class IoFailure(OSError):
    pass


class Box(NamedTuple):
    """Axis-aligned rectangle, top-left origin, in pixels."""

    x: int
    y: int
    w: int
    h: int

    @property
    def area(self) -> int:
        return self.w * self.h

    def intersection(self, other: "Box") -> int:
        dx = min(self.x + self.w, other.x + other.w) - max(self.x, other.x)
        dy = min(self.y + self.h, other.y + other.h) - max(self.y, other.y)
        if dx <= 0 or dy <= 0:
            return 0
        return dx * dy

    def inside(self, width: int, height: int) -> bool:
        return (
            self.w >= 1
            and self.h >= 1
            and self.x >= 0
            and self.y >= 0
            and self.x + self.w <= width
            and self.y + self.h <= height
        )


BoxList = List[Box]


def to_gray(rgb: np.ndarray) -> np.ndarray:
    """ITU-R 601 luminance, rounded half up, computed in exact integer arithmetic."""
    rgb = np.asarray(rgb, dtype=np.uint32)
    y = (299 * rgb[..., 0] + 587 * rgb[..., 1] + 114 * rgb[..., 2] + 500) // 1000
    return y.astype(np.uint8)


def _read_token(buf: bytes, pos: int) -> tuple[bytes, int, int]:
    """Return (token, start, end) of the next header token, skipping comments."""
    n = len(buf)
    while pos < n:
        c = buf[pos : pos + 1]
        if c == b"#":
            while pos < n and buf[pos : pos + 1] not in (b"\n", b"\r"):
                pos += 1
        elif c in _WHITESPACE:
            pos += 1
        else:
            break
    start = pos
    while pos < n and buf[pos : pos + 1] not in _WHITESPACE and buf[pos : pos + 1] != b"#":
        pos += 1
    return buf[start:pos], start, pos


def decode_netpbm(buf: bytes) -> np.ndarray:
    """Decode a binary P5/P6 file. Returns ``(h, w)`` or ``(h, w, 3)`` uint8."""
    if len(buf) < 2 or buf[:2] not in (b"P5", b"P6"):
        raise MalformedHeader("expected magic P5 or P6", 0)
    channels = 1 if buf[:2] == b"P5" else 3
    pos = 2
    if pos >= len(buf) or buf[pos : pos + 1] not in _WHITESPACE:
        raise MalformedHeader("expected whitespace after magic", pos)
    values = []
    for name in ("width", "height", "maxval"):
        tok, start, pos = _read_token(buf, pos)
        if not tok:
            raise MalformedHeader(f"missing {name}", start)
        if not tok.isdigit():
            raise MalformedHeader(f"{name} is not a decimal integer: {tok!r}", start)
        values.append((int(tok), start))
    (width, wpos), (height, hpos), (maxval, mpos) = values
    if width < 1:
        raise MalformedHeader("width must be at least 1", wpos)
    if height < 1:
        raise MalformedHeader("height must be at least 1", hpos)
    if maxval != 255:
        raise UnsupportedMaxval(maxval, mpos)
    if pos >= len(buf) or buf[pos : pos + 1] not in _WHITESPACE:
        raise MalformedHeader("expected single whitespace before pixel data", pos)
    pos += 1
    expected = width * height * channels
    got = len(buf) - pos
    if got < expected:
        raise TruncatedData(expected, got, pos)
    data = np.frombuffer(buf, dtype=np.uint8, count=expected, offset=pos)
    shape = (height, width) if channels == 1 else (height, width, 3)
    return data.reshape(shape).copy()


def load_gray(path: str | os.PathLike) -> np.ndarray:
    """Read a P5 or P6 file as a gray image; colour input goes through `to_gray`."""
    with open(path, "rb") as fh:
        buf = fh.read()
    img = decode_netpbm(buf)
    if img.ndim == 3:
        return to_gray(img)
    return img


def load_rgb(path: str | os.PathLike) -> np.ndarray:
    with open(path, "rb") as fh:
        img = decode_netpbm(fh.read())
    if img.ndim == 2:
        return np.repeat(img[:, :, None], 3, axis=2)
    return img


def _write(path, payload: bytes) -> None:
    try:
        with open(path, "wb") as fh:
            fh.write(payload)
    except OSError as exc:
        raise IoFailure(f"cannot write {os.fspath(path)}: {exc.strerror}") from exc


def encode_gray(img: np.ndarray) -> bytes:
    img = np.ascontiguousarray(img, dtype=np.uint8)
    if img.ndim != 2 or img.size == 0:
        raise ValueError("gray image must be a non-empty 2-D array")
    h, w = img.shape
    return b"P5\n%d %d\n255\n" % (w, h) + img.tobytes()


def encode_rgb(img: np.ndarray) -> bytes:
    img = np.ascontiguousarray(img, dtype=np.uint8)
    if img.ndim != 3 or img.shape[2] != 3 or img.size == 0:
        raise ValueError("RGB image must be a non-empty (h, w, 3) array")
    h, w, _ = img.shape
    return b"P6\n%d %d\n255\n" % (w, h) + img.tobytes()


def save_gray(img: np.ndarray, path: str | os.PathLike) -> None:
    _write(path, encode_gray(img))


def save_rgb(img: np.ndarray, path: str | os.PathLike) -> None:
    _write(path, encode_rgb(img))


def parse_truth(text: str) -> BoxList:
    lines = text.split("\n")
    if not lines or lines[0].rstrip("\r") != TRUTH_MAGIC:
        raise BadMagic(f"expected first line {TRUTH_MAGIC!r}, got {lines[0][:32]!r}")
    boxes = []
    for lineno, line in enumerate(lines[1:], start=2):
        stripped = line.strip()
        if not stripped:
            continue
        parts = stripped.split()
        if len(parts) != 4 or not all(p.isdigit() for p in parts):
            raise BadLine(lineno, line)
        box = Box(*(int(p) for p in parts))
        if box.w < 1 or box.h < 1:
            raise BadLine(lineno, line)
        boxes.append(box)
    return boxes


def read_truth(path: str | os.PathLike) -> BoxList:
    with open(path, "r", encoding="ascii", newline="") as fh:
        return parse_truth(fh.read())


def format_truth(boxes: Iterable[Sequence[int]]) -> str:
    out = [TRUTH_MAGIC]
    for b in boxes:
        x, y, w, h = (int(v) for v in b)
        out.append(f"{x} {y} {w} {h}")
    return "\n".join(out) + "\n"


def write_truth(boxes: Iterable[Sequence[int]], path: str | os.PathLike) -> None:
    _write(path, format_truth(boxes).encode("ascii"))


def render_overlay(img: np.ndarray, boxes: Sequence[Sequence[int]]) -> np.ndarray:
    """Replicate ``img`` into RGB and draw each box as a 1-px red outline."""
    h, w = img.shape
    for i, b in enumerate(boxes):
        if not Box(*b).inside(w, h):
            raise BoxOutOfBounds(i)
    out = np.repeat(np.asarray(img, dtype=np.uint8)[:, :, None], 3, axis=2)
    red = np.array([255, 0, 0], dtype=np.uint8)
    for x, y, bw, bh in boxes:
        out[y, x : x + bw] = red
        out[y + bh - 1, x : x + bw] = red
        out[y : y + bh, x] = red
        out[y : y + bh, x + bw - 1] = red
    return out
