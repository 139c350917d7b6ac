"""JSON experiment configuration: schema, loading and validation."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import jsonschema

from .errors import ConfigError
from .space import DiscreteSpace, JumpMeasure, TestFunction

MODES = ("moments", "converge", "oracle", "partitions")

_RATIONAL = {"type": ["string", "integer"], "pattern": r"^-?[0-9]+(/[0-9]+)?$"}
_POS_INT = {"type": "integer", "minimum": 1}

SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "mode": {"enum": list(MODES)},
        "space": {
            "type": "object",
            "additionalProperties": False,
            "required": ["cells"],
            "properties": {
                "cells": {"type": "object", "minProperties": 1, "additionalProperties": _RATIONAL},
                "bulk": {"type": "string"},
            },
        },
        "jumps": {
            "type": "array",
            "minItems": 1,
            "items": {"type": "array", "prefixItems": [_RATIONAL, _RATIONAL], "minItems": 2, "maxItems": 2},
        },
        "functions": {
            "type": "object",
            "additionalProperties": {"type": "object", "additionalProperties": _RATIONAL},
        },
        "words": {
            "type": "array",
            "items": {"type": "array", "minItems": 1, "items": {"type": "string"}},
        },
        "count": {"enum": ["fixed", "poissonized"]},
        "rho": _RATIONAL,
        "N": _POS_INT,
        "alpha": _RATIONAL,
        "schedule": {"type": "array", "items": _RATIONAL},
        "centered": {"type": "boolean"},
        "tail_tol": {"type": "number", "exclusiveMinimum": 0},
        "n": _POS_INT,
        "oracle": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "max_particles": _POS_INT,
                "max_word_length": _POS_INT,
                "alphas": {"type": "array", "items": _RATIONAL},
                "poisson_max_word_length": _POS_INT,
                "freeness_max_word_length": _POS_INT,
            },
        },
        "output": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "path": {"type": "string"},
                "format": {"enum": ["csv", "json"]},
            },
        },
    },
}


@dataclass
class OracleSettings:
    max_particles: int = 3
    max_word_length: int = 4
    alphas: tuple[Fraction, ...] = (Fraction(1),)
    poisson_max_word_length: int = 2
    freeness_max_word_length: int = 3


@dataclass
class ExperimentConfig:
    mode: str
    space: DiscreteSpace | None = None
    bulk: str | None = None
    jumps: JumpMeasure | None = None
    functions: dict[str, TestFunction] = field(default_factory=dict)
    words: list[tuple[str, ...]] = field(default_factory=list)
    count: str = "fixed"
    rho: Fraction = Fraction(1)
    N: int | None = None
    alpha: Fraction | None = None
    schedule: tuple[Fraction, ...] = ()
    centered: bool = False
    tail_tol: float = 1e-9
    n: int | None = None
    oracle: OracleSettings = field(default_factory=OracleSettings)
    output_path: str | None = None
    output_format: str = "csv"

    def word_functions(self, word: tuple[str, ...]) -> tuple[TestFunction, ...]:
        return tuple(self.functions[name] for name in word)


def _where(path) -> str:
    return "$" + "".join(f"[{p}]" if isinstance(p, int) else f".{p}" for p in path)


def parse_config(doc: dict, mode: str) -> ExperimentConfig:
    """Validate a decoded JSON document for the given subcommand."""
    if mode not in MODES:
        raise ConfigError(f"unknown mode {mode!r}")
    try:
        jsonschema.validate(doc, SCHEMA)
    except jsonschema.ValidationError as err:
        exc = ConfigError(f"{_where(err.absolute_path)}: {err.message}")
        exc.path = tuple(err.absolute_path)
        raise exc from None
    if doc.get("mode", mode) != mode:
        raise ConfigError(f"$.mode: config is for {doc['mode']!r} but subcommand is {mode!r}")

    cfg = ExperimentConfig(mode=mode)
    out = doc.get("output", {})
    cfg.output_path = out.get("path")
    cfg.output_format = out.get("format", "csv")

    if mode == "partitions":
        if "n" not in doc:
            raise ConfigError("$.n: required for partitions mode")
        cfg.n = doc["n"]
        return cfg

    if "space" not in doc:
        raise ConfigError("$.space: required")
    try:
        cfg.space = DiscreteSpace.from_masses({c: Fraction(m) for c, m in doc["space"]["cells"].items()})
        if "jumps" in doc:
            cfg.jumps = JumpMeasure(tuple((Fraction(s), Fraction(m)) for s, m in doc["jumps"]))
    except (ValueError, ZeroDivisionError) as err:
        raise ConfigError(f"$.space/$.jumps: {err}") from None
    cfg.bulk = doc["space"].get("bulk")
    if cfg.bulk is not None and cfg.bulk not in cfg.space.cells:
        raise ConfigError(f"$.space.bulk: {cfg.bulk!r} is not a cell")

    for name, values in doc.get("functions", {}).items():
        unknown = set(values) - set(cfg.space.cells)
        if unknown:
            raise ConfigError(f"$.functions.{name}: unknown cells {sorted(unknown)}")
        cfg.functions[name] = TestFunction.from_mapping(cfg.space, {c: Fraction(v) for c, v in values.items()}, name)
    if not cfg.functions:
        raise ConfigError("$.functions: at least one function is required")

    for i, word in enumerate(doc.get("words", [])):
        for name in word:
            if name not in cfg.functions:
                raise ConfigError(f"$.words[{i}]: undefined function {name!r}")
        cfg.words.append(tuple(word))

    cfg.count = doc.get("count", "fixed")
    cfg.rho = Fraction(doc.get("rho", 1))
    if cfg.rho <= 0:
        raise ConfigError("$.rho: must be positive")
    cfg.N = doc.get("N")
    if "alpha" in doc:
        cfg.alpha = Fraction(doc["alpha"])
        if cfg.alpha < 0:
            raise ConfigError("$.alpha: must be nonnegative")
    cfg.centered = doc.get("centered", False)
    cfg.tail_tol = float(doc.get("tail_tol", 1e-9))

    try:
        cfg.schedule = tuple(Fraction(c) for c in doc.get("schedule", ()))
    except ZeroDivisionError:
        raise ConfigError("$.schedule: zero denominator") from None
    if any(c <= 0 for c in cfg.schedule):
        raise ConfigError("$.schedule: scale factors must be positive")
    if any(a >= b for a, b in zip(cfg.schedule, cfg.schedule[1:])):
        raise ConfigError("$.schedule: must be strictly increasing")

    if mode in ("moments", "converge") and not cfg.words:
        raise ConfigError("$.words: at least one word is required")
    if mode == "converge":
        if len(cfg.schedule) < 3:
            raise ConfigError("$.schedule: need at least 3 points to estimate an order")
        if cfg.bulk is None:
            raise ConfigError("$.space.bulk: converge mode needs a bulk cell to grow")
        b = cfg.space.index(cfg.bulk)
        for name, f in cfg.functions.items():
            if f.values[b] != 0:
                raise ConfigError(f"$.functions.{name}: must vanish on the bulk cell {cfg.bulk!r}")

    if "oracle" in doc:
        o = doc["oracle"]
        cfg.oracle = OracleSettings(
            max_particles=o.get("max_particles", 3),
            max_word_length=o.get("max_word_length", 4),
            alphas=tuple(Fraction(a) for a in o.get("alphas", ["1"])),
            poisson_max_word_length=o.get("poisson_max_word_length", 2),
            freeness_max_word_length=o.get("freeness_max_word_length", 3),
        )
    return cfg


def load_config(path: str | Path, mode: str) -> ExperimentConfig:
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as err:
        raise ConfigError(f"{path}:{err.lineno}:{err.colno}: {err.msg}") from None
    if not isinstance(doc, dict):
        raise ConfigError(f"{path}: top level must be a JSON object")
    try:
        return parse_config(doc, mode)
    except ConfigError as err:
        keys = getattr(err, "path", None)
        if keys is None:
            keys = re.findall(r"\.(\w+)", str(err).split(":")[0])
        line = _locate(text, keys)
        raise ConfigError(f"{path}:{line}: {err}") from None


def _locate(text: str, keys) -> int:
    """Best-effort line of the object member addressed by ``keys``."""
    pos = 0
    for key in keys:
        if isinstance(key, str):
            hit = text.find(json.dumps(key), pos)
            if hit >= 0:
                pos = hit
    return text.count("\n", 0, pos) + 1
