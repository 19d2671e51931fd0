"""Flat ``key = value`` config files for SegConfig and SynthSpec."""
from __future__ import annotations

import dataclasses
import typing
from typing import Dict, Mapping

from .edt import FIXED_SCALE, MAX_NORMALIZE
from .segmenter import SegConfig
from .synth import SynthSpec

SCALE_ALIASES = {"fixed": FIXED_SCALE, "max": MAX_NORMALIZE, FIXED_SCALE: FIXED_SCALE, MAX_NORMALIZE: MAX_NORMALIZE}


class ConfigError(ValueError):
    pass


def parse_kv(text: str) -> Dict[str, str]:
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ConfigError(f"line {lineno}: empty key")
        out[key.replace("-", "_")] = value
    return out


def _convert(name: str, hint, value: str):
    origin = typing.get_origin(hint)
    args = typing.get_args(hint)
    try:
        if origin is typing.Union and type(None) in args:
            if value.lower() in ("", "none", "otsu"):
                return None
            return _convert(name, next(a for a in args if a is not type(None)), value)
        if origin is tuple:
            parts = value.replace(",", " ").replace("..", " ").split()
            if len(parts) != 2:
                raise ConfigError(f"{name}: expected two integers, got {value!r}")
            return tuple(int(p) for p in parts)
        if hint is int:
            return int(value)
        if hint is float:
            return float(value)
        return value
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"{name}: cannot parse {value!r}") from exc


def _build(cls, values: Mapping[str, str], base=None):
    hints = typing.get_type_hints(cls)
    names = {f.name for f in dataclasses.fields(cls)}
    kwargs = dataclasses.asdict(base) if base is not None else {}
    for key, value in values.items():
        if key not in names:
            raise ConfigError(f"unknown key {key!r}")
        if key == "scale_mode":
            if value not in SCALE_ALIASES:
                raise ConfigError(f"scale_mode: unknown mode {value!r}")
            kwargs[key] = SCALE_ALIASES[value]
        else:
            kwargs[key] = _convert(key, hints[key], value)
    try:
        return cls(**kwargs)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def seg_config_from_text(text: str, base: SegConfig | None = None) -> SegConfig:
    return _build(SegConfig, parse_kv(text), base)


def seg_config_from_mapping(values: Mapping[str, str], base: SegConfig | None = None) -> SegConfig:
    return _build(SegConfig, values, base)


def synth_spec_from_text(text: str) -> SynthSpec:
    return _build(SynthSpec, parse_kv(text))


def format_kv(obj) -> str:
    lines = []
    for f in dataclasses.fields(obj):
        v = getattr(obj, f.name)
        if isinstance(v, tuple):
            v = " ".join(str(x) for x in v)
        lines.append(f"{f.name} = {v}")
    return "\n".join(lines) + "\n"
