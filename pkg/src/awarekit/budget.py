"""Evaluation and enumeration limits.

``AWAREKIT_BUDGET`` overrides defaults, as JSON (``{"bc_cap": 5}``) or as
comma-separated ``key=value`` pairs (``bc_cap=5,max_size=7``).
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, fields, replace

ENV_VAR = "AWAREKIT_BUDGET"


@dataclass(frozen=True)
class Budget:
    # nesting of predicate quantifiers the checker will expand
    max_pred_nesting: int = 2
    # largest P_w over which predicate quantifiers are expanded
    bc_cap: int = 4
    allow_trivial: bool = False
    # oracle enumeration
    max_size: int = 6
    max_modal_depth: int = 1
    max_quant_nesting: int = 1
    # exhaustive contract search
    max_cells: int = 6
    max_objects: int = 4


def _coerce(name: str, raw):
    default = getattr(Budget(), name)
    if isinstance(default, bool):
        if isinstance(raw, str):
            return raw.strip().lower() in ("1", "true", "yes", "on")
        return bool(raw)
    return int(raw)


def parse_overrides(text: str) -> dict:
    text = text.strip()
    if not text:
        return {}
    if text.startswith("{"):
        raw = json.loads(text)
    else:
        raw = {}
        for item in filter(str.strip, text.split(",")):
            if "=" not in item:
                raise ValueError(f"expected key=value in {ENV_VAR}, got {item.strip()!r}")
            k, v = item.split("=", 1)
            raw[k] = v
    known = {f.name for f in fields(Budget)}
    out = {}
    for k, v in raw.items():
        k = k.strip()
        if k not in known:
            raise ValueError(f"unknown budget key {k!r}")
        out[k] = _coerce(k, v)
    return out


def from_env(base: Budget | None = None, environ=None) -> Budget:
    environ = os.environ if environ is None else environ
    base = base or Budget()
    text = environ.get(ENV_VAR)
    return replace(base, **parse_overrides(text)) if text else base
