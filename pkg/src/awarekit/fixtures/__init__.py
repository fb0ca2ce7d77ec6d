"""Bundled example models, contracts and proofs."""

from __future__ import annotations

import json
from importlib import resources

from awarekit.model import Model, from_dict

MODELS = ("ex1", "ex2", "ex2b", "ex4")


def path(name: str):
    """Filesystem path of a bundled file, e.g. ``path("ex1.json")``."""
    return resources.files(__name__).joinpath(name)


def load_json(name: str):
    return json.loads(path(name).read_text(encoding="utf-8"))


def model(name: str, check: bool = True) -> Model:
    return from_dict(load_json(f"{name}.json"), check=check)


def proof_names() -> list[str]:
    root = resources.files(__name__).joinpath("proofs")
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def mutation_manifest() -> dict:
    """Proof name -> the line and reason its one-line mutation is rejected with."""
    return load_json("mutations/manifest.json")
