"""Session defaults: algebra, bounds and output mode.

Values come from built-in defaults, then an optional JSON file named by the
``HAHN_TRUNC_CONFIG`` environment variable, then command-line flags.
"""
from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, fields, replace

from .algebra import Algebra, make_algebra
from .dividing import TowerCaps
from .errors import UsageError

ENV_VAR = "HAHN_TRUNC_CONFIG"
DEFAULT_SEED = 20240601


@dataclass(frozen=True)
class SessionConfig:
    group: str = "rat"
    field: str = "rat"
    modulus: int | None = None
    bound: int = 64
    depth: int = 32
    outer_cap: int = 2
    exponent_cap: int = 3
    max_bits: int = 1 << 20
    output: str = "text"
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        if self.group not in ("int", "rat", "lex2"):
            raise UsageError(f"unknown value group {self.group!r}")
        if self.output not in ("text", "json"):
            raise UsageError(f"unknown output mode {self.output!r}")
        for name in ("bound", "depth", "exponent_cap", "max_bits"):
            if getattr(self, name) < 1:
                raise UsageError(f"{name} must be at least 1")
        if self.outer_cap < 0:
            raise UsageError("outer_cap must be non-negative")
        self.algebra()  # validates field and modulus

    def algebra(self) -> Algebra:
        return make_algebra(self.group, self.field, self.modulus)

    def caps(self) -> TowerCaps:
        return TowerCaps(self.outer_cap, self.exponent_cap, self.max_bits)

    def to_json(self) -> dict:
        return asdict(self)


def load_file(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"config file {path} is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise UsageError(f"config file {path} must hold a JSON object")
    known = {f.name for f in fields(SessionConfig)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise UsageError(f"unknown config keys in {path}: {', '.join(unknown)}")
    return data


def load(overrides: dict | None = None, environ=None) -> SessionConfig:
    """Defaults, then the file from the environment, then non-None ``overrides``."""
    environ = os.environ if environ is None else environ
    values = {}
    path = environ.get(ENV_VAR)
    if path:
        values.update(load_file(path))
    values.update({k: v for k, v in (overrides or {}).items() if v is not None})
    try:
        return replace(SessionConfig(), **values)
    except TypeError as exc:
        raise UsageError(str(exc)) from None
