"""Experiment configuration: INI-style sections with ``key = value`` lines.

Example::

    [experiment]
    name = ito_limit
    scheme = ito

    [physics]
    m = 1
    hbar = 1
    T = 1
    x = 1

    [numerics]
    nu_list = 1e2, 1e3, 1e4, 1e5

    [thresholds]
    max_rel_error = 0.02

Complex numbers are written ``re,im``; lists are comma separated (lists of
complex numbers use ``;`` between entries).
"""

from __future__ import annotations

import configparser
import os
from dataclasses import dataclass, field
from typing import Any

from ..errors import ConfigError

SECTIONS = ("experiment", "physics", "numerics", "thresholds")


def parse_float(text: str) -> float:
    return float(text.strip())


def parse_complex(text: str) -> complex:
    parts = [t.strip() for t in text.split(",")]
    if len(parts) == 1:
        return complex(float(parts[0]), 0.0)
    if len(parts) == 2:
        return complex(float(parts[0]), float(parts[1]))
    raise ValueError(f"complex values are written 're,im', got {text!r}")


def parse_float_list(text: str) -> list:
    return [float(t) for t in text.replace(";", ",").split(",") if t.strip()]


def parse_int_list(text: str) -> list:
    out = []
    for t in text.replace(";", ",").split(","):
        t = t.strip()
        if not t:
            continue
        v = float(t)
        if v != int(v):
            raise ValueError(f"expected an integer, got {t!r}")
        out.append(int(v))
    return out


@dataclass
class ExperimentConfig:
    name: str
    scheme: str
    physics: dict = field(default_factory=dict)
    numerics: dict = field(default_factory=dict)
    thresholds: dict = field(default_factory=dict)
    source: str | None = None
    output: str | None = None

    def echo(self) -> dict[str, Any]:
        """Raw string values, enough to reproduce every row."""
        return {"name": self.name, "scheme": self.scheme, "output": self.output, "physics": dict(self.physics),
                "numerics": dict(self.numerics), "thresholds": dict(self.thresholds)}

    def get(self, section: str, key: str, default=None):
        return getattr(self, section).get(key, default)


def load_config(path: str | os.PathLike) -> ExperimentConfig:
    if not os.path.exists(path):
        raise ConfigError(f"config file not found: {path}")
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read(), source=str(path))


def parse_config(text: str, source: str | None = None) -> ExperimentConfig:
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#",))
    cp.optionxform = str  # keep key case (T vs t)
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"unreadable config: {exc}") from None
    unknown = [s for s in cp.sections() if s not in SECTIONS]
    errors = [f"[{s}]: unknown section" for s in unknown]
    if not cp.has_section("experiment"):
        errors.append("[experiment]: section missing")
        raise ConfigError(errors)
    exp = cp["experiment"]
    name = exp.get("name", "").strip()
    scheme = exp.get("scheme", "").strip()
    if not name:
        errors.append("experiment.name: required")
    elif any(c in name for c in "/\\") or name.startswith("."):
        errors.append("experiment.name: must be a plain file stem")
    if not scheme:
        errors.append("experiment.scheme: required")
    if errors:
        raise ConfigError(errors)
    extra = set(exp) - {"name", "scheme", "output"}
    if extra:
        raise ConfigError([f"experiment.{k}: unknown field" for k in sorted(extra)])
    sec = {s: dict(cp[s]) if cp.has_section(s) else {} for s in SECTIONS[1:]}
    output = exp.get("output", "").strip() or None
    return ExperimentConfig(name, scheme, sec["physics"], sec["numerics"], sec["thresholds"], source, output)
