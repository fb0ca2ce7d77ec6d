"""Partial-awareness model structures and the JSON model format."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping

import jsonschema

from awarekit.errors import (
    AwarenessExceedsLanguage,
    AwarenessNotConstant,
    ConceptOutOfLanguage,
    ModelError,
    NoEconomy,
    NotAPartition,
    ParseError,
    SchemaError,
)
from awarekit.syntax import Signature, bc_key, parse_bc


@dataclass(frozen=True)
class LanguageSlice:
    """Predicate and concept symbols; objects are always implicitly included."""

    predicates: frozenset = frozenset()
    concepts: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "predicates", frozenset(self.predicates))
        object.__setattr__(self, "concepts", frozenset(self.concepts))

    def __le__(self, other: "LanguageSlice") -> bool:
        return self.predicates <= other.predicates and self.concepts <= other.concepts

    def __and__(self, other: "LanguageSlice") -> "LanguageSlice":
        return LanguageSlice(self.predicates & other.predicates, self.concepts & other.concepts)

    def __sub__(self, other: "LanguageSlice") -> "LanguageSlice":
        return LanguageSlice(self.predicates - other.predicates, self.concepts - other.concepts)

    @property
    def symbols(self) -> frozenset:
        return self.predicates | self.concepts

    def to_dict(self) -> dict:
        return {"predicates": sorted(self.predicates), "concepts": sorted(self.concepts)}


@dataclass(frozen=True)
class Economy:
    """Utilities ``(agent, state, object) -> Fraction`` and the two endowments."""

    utilities: Mapping
    endow1: tuple
    endow2: tuple

    def u(self, agent: int, state: str, obj: str) -> Fraction:
        return self.utilities[agent, state, obj]

    @property
    def endowments(self) -> dict:
        return {1: self.endow1, 2: self.endow2}


@dataclass(frozen=True, eq=False)
class Model:
    sig: Signature
    states: tuple
    language: Mapping  # state -> LanguageSlice
    awareness: Mapping  # (agent, state) -> LanguageSlice
    partitions: Mapping  # agent -> tuple of frozensets
    extensions: Mapping  # (state, predicate) -> frozenset of names
    concept_defs: Mapping  # (state, concept) -> BooleanConcept
    economy: Economy | None = None
    _cells: dict = field(default_factory=dict, init=False, repr=False)
    _index: dict = field(default_factory=dict, init=False, repr=False)

    def __post_init__(self):
        self._index.update({w: k for k, w in enumerate(self.states)})
        for i, blocks in self.partitions.items():
            for b in blocks:
                for w in b:
                    self._cells[i, w] = b

    @property
    def agents(self) -> range:
        return range(1, self.sig.agents + 1)

    def index(self, state: str) -> int:
        return self._index[state]

    def cell(self, agent: int, state: str) -> frozenset:
        """K_i(state): the information cell of ``agent`` containing ``state``."""
        return self._cells[agent, state]

    def sorted_states(self, states: Iterable[str]) -> list:
        return sorted(states, key=self._index.__getitem__)

    def aware(self, agent: int, state: str) -> LanguageSlice:
        return self.awareness[agent, state]

    def extension(self, state: str, pred: str) -> frozenset:
        return self.extensions.get((state, pred), frozenset())

    def require_economy(self) -> Economy:
        if self.economy is None:
            raise NoEconomy()
        return self.economy

    def with_economy(self, economy: Economy | None) -> "Model":
        return Model(
            self.sig,
            self.states,
            self.language,
            self.awareness,
            self.partitions,
            self.extensions,
            self.concept_defs,
            economy,
        )

    def __eq__(self, other):
        if not isinstance(other, Model):
            return NotImplemented
        return to_dict(self) == to_dict(other)

    def __hash__(self):
        return id(self)


# ---------------------------------------------------------------- validation


def check_partitions(m: Model) -> None:
    states = set(m.states)
    for i in m.agents:
        if i not in m.partitions:
            raise NotAPartition(i, "missing")
        seen: set = set()
        for b in m.partitions[i]:
            if not b:
                raise NotAPartition(i, "empty cell")
            if b & seen:
                raise NotAPartition(i, f"cells overlap on {m.sorted_states(b & seen)}")
            if b - states:
                raise NotAPartition(i, f"unknown states {sorted(b - states)}")
            seen |= b
        if seen != states:
            raise NotAPartition(i, f"states not covered: {m.sorted_states(states - seen)}")


def awareness_constancy_violations(m: Model) -> list[tuple]:
    """All ``(agent, w, w2)`` where w is the least state of a cell and w2 a
    cellmate with different awareness."""
    out = []
    for i in m.agents:
        for b in m.partitions[i]:
            first, *rest = m.sorted_states(b)
            out += [(i, first, w) for w in rest if m.aware(i, w) != m.aware(i, first)]
    return out


def validate_awareness_constancy(m: Model) -> list[tuple]:
    """Empty list when awareness is constant on every cell."""
    return awareness_constancy_violations(m)


def check_model(m: Model, constancy: bool = True) -> None:
    """Raise the first named invariant violation."""
    check_partitions(m)
    for w in m.states:
        lang = m.language[w]
        for i in m.agents:
            extra = m.aware(i, w) - lang
            if extra.symbols:
                raise AwarenessExceedsLanguage(i, w, extra.symbols)
        for c in lang.concepts:
            bc = m.concept_defs[w, c]
            extra = set(bc.support) - lang.predicates
            if extra:
                raise ConceptOutOfLanguage(w, c, extra)
    if constancy:
        bad = awareness_constancy_violations(m)
        if bad:
            raise AwarenessNotConstant(*bad[0])


def model_violations(m: Model) -> list[ModelError]:
    """Every invariant violation, for reporting rather than raising."""
    out: list[ModelError] = []
    try:
        check_partitions(m)
    except NotAPartition as e:
        return [e]
    for w in m.states:
        lang = m.language[w]
        for i in m.agents:
            extra = m.aware(i, w) - lang
            if extra.symbols:
                out.append(AwarenessExceedsLanguage(i, w, extra.symbols))
        for c in sorted(lang.concepts):
            extra = set(m.concept_defs[w, c].support) - lang.predicates
            if extra:
                out.append(ConceptOutOfLanguage(w, c, extra))
    out += [AwarenessNotConstant(*v) for v in awareness_constancy_violations(m)]
    return out


# -------------------------------------------------------------- file format

_SLICE = {
    "type": "object",
    "properties": {
        "predicates": {"type": "array", "items": {"type": "string"}, "uniqueItems": True},
        "concepts": {"type": "array", "items": {"type": "string"}, "uniqueItems": True},
    },
    "required": ["predicates", "concepts"],
    "additionalProperties": False,
}
_NAMES = {"type": "array", "items": {"type": "string"}, "uniqueItems": True}
_RATIONAL = {
    "oneOf": [
        {"type": "integer"},
        {"type": "string", "pattern": r"^\s*-?\d+(\s*/\s*\d+)?\s*$"},
    ]
}

MODEL_SCHEMA = {
    "type": "object",
    "properties": {
        "agents": {"type": "integer", "minimum": 1},
        "objects": {**_NAMES, "minItems": 1},
        "predicates": _NAMES,
        "concepts": _NAMES,
        "states": {**_NAMES, "minItems": 1},
        "language": {"type": "object", "additionalProperties": _SLICE},
        "awareness": {
            "type": "object",
            "additionalProperties": {"type": "object", "additionalProperties": _SLICE},
        },
        "partitions": {
            "type": "object",
            "additionalProperties": {"type": "array", "items": _NAMES},
        },
        "extensions": {
            "type": "object",
            "additionalProperties": {"type": "object", "additionalProperties": _NAMES},
        },
        "concept_defs": {
            "type": "object",
            "additionalProperties": {
                "type": "object",
                "additionalProperties": {"type": "string"},
            },
        },
        "utilities": {
            "type": "object",
            "additionalProperties": {
                "type": "object",
                "additionalProperties": {"type": "object", "additionalProperties": _RATIONAL},
            },
        },
        "endowments": {
            "type": "object",
            "properties": {"1": {**_NAMES, "minItems": 1}, "2": {**_NAMES, "minItems": 1}},
            "required": ["1", "2"],
            "additionalProperties": False,
        },
    },
    "required": [
        "agents",
        "objects",
        "predicates",
        "concepts",
        "states",
        "language",
        "awareness",
        "partitions",
        "extensions",
        "concept_defs",
    ],
    "additionalProperties": False,
}


def parse_rational(v) -> Fraction:
    return Fraction(v) if isinstance(v, int) else Fraction(str(v).replace(" ", ""))


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _keys_exact(where: str, got: Iterable, want: Iterable) -> None:
    got, want = set(got), set(want)
    if got != want:
        parts = []
        if want - got:
            parts.append(f"missing {sorted(want - got)}")
        if got - want:
            parts.append(f"unexpected {sorted(got - want)}")
        raise SchemaError(f"{where}: {', '.join(parts)}")


def _slice(d: dict, sig: Signature, where: str) -> LanguageSlice:
    bad = set(d["predicates"]) - set(sig.predicates)
    bad |= set(d["concepts"]) - set(sig.concepts)
    if bad:
        raise SchemaError(f"{where}: undeclared symbols {sorted(bad)}")
    return LanguageSlice(d["predicates"], d["concepts"])


def from_dict(data: dict, check: bool = True) -> Model:
    try:
        jsonschema.validate(data, MODEL_SCHEMA)
    except jsonschema.ValidationError as e:
        loc = "/".join(str(p) for p in e.absolute_path) or "<root>"
        raise SchemaError(f"{loc}: {e.message}") from None
    try:
        sig = Signature.from_dict(data)
    except ValueError as e:
        raise SchemaError(str(e)) from None
    states = tuple(data["states"])
    if set(states) & set(sig.objects + sig.predicates + sig.concepts):
        raise SchemaError("state names must differ from symbol names")
    agents = [str(i) for i in range(1, sig.agents + 1)]

    _keys_exact("language", data["language"], states)
    language = {w: _slice(data["language"][w], sig, f"language/{w}") for w in states}

    _keys_exact("awareness", data["awareness"], agents)
    awareness = {}
    for a in agents:
        _keys_exact(f"awareness/{a}", data["awareness"][a], states)
        for w in states:
            awareness[int(a), w] = _slice(data["awareness"][a][w], sig, f"awareness/{a}/{w}")

    _keys_exact("partitions", data["partitions"], agents)
    partitions = {}
    for a in agents:
        blocks = data["partitions"][a]
        for b in blocks:
            unknown = set(b) - set(states)
            if unknown:
                raise NotAPartition(int(a), f"unknown states {sorted(unknown)}")
        partitions[int(a)] = tuple(frozenset(b) for b in blocks)

    _keys_exact("extensions", data["extensions"], states)
    extensions = {}
    for w in states:
        ext = data["extensions"][w]
        _keys_exact(f"extensions/{w}", ext, language[w].predicates)
        for p, objs in ext.items():
            unknown = set(objs) - set(sig.objects)
            if unknown:
                raise SchemaError(f"extensions/{w}/{p}: undeclared objects {sorted(unknown)}")
            extensions[w, p] = frozenset(objs)

    _keys_exact("concept_defs", data["concept_defs"], states)
    concept_defs = {}
    for w in states:
        defs = data["concept_defs"][w]
        _keys_exact(f"concept_defs/{w}", defs, language[w].concepts)
        for c, text in defs.items():
            try:
                concept_defs[w, c] = bc_key(parse_bc(text, sig))
            except ParseError as e:
                raise SchemaError(f"concept_defs/{w}/{c}: {e}") from None

    economy = None
    if "utilities" in data or "endowments" in data:
        if "utilities" not in data or "endowments" not in data:
            raise SchemaError("utilities and endowments must be given together")
        economy = _economy(data, sig, states, agents)

    m = Model(sig, states, language, awareness, partitions, extensions, concept_defs, economy)
    if check:
        check_model(m)
    return m


def _economy(data, sig, states, agents) -> Economy:
    raw = data["utilities"]
    _keys_exact("utilities", raw, agents)
    util = {}
    for a in agents:
        _keys_exact(f"utilities/{a}", raw[a], states)
        for w in states:
            _keys_exact(f"utilities/{a}/{w}", raw[a][w], sig.objects)
            for d, v in raw[a][w].items():
                util[int(a), w, d] = parse_rational(v)
    e1, e2 = data["endowments"]["1"], data["endowments"]["2"]
    unknown = (set(e1) | set(e2)) - set(sig.objects)
    if unknown:
        raise SchemaError(f"endowments: undeclared objects {sorted(unknown)}")
    if set(e1) & set(e2):
        raise SchemaError(f"endowments overlap on {sorted(set(e1) & set(e2))}")
    order = {d: k for k, d in enumerate(sig.objects)}
    return Economy(
        util, tuple(sorted(e1, key=order.__getitem__)), tuple(sorted(e2, key=order.__getitem__))
    )


def to_dict(m: Model) -> dict:
    """Canonical serialization: symbol lists in declared order, sets sorted."""
    agents = [str(i) for i in m.agents]
    obj_order = {d: k for k, d in enumerate(m.sig.objects)}
    out = m.sig.to_dict()
    out["states"] = list(m.states)
    out["language"] = {w: m.language[w].to_dict() for w in m.states}
    out["awareness"] = {a: {w: m.aware(int(a), w).to_dict() for w in m.states} for a in agents}
    out["partitions"] = {
        a: sorted(
            (m.sorted_states(b) for b in m.partitions[int(a)]), key=lambda b: m.index(b[0])
        )
        for a in agents
    }
    out["extensions"] = {
        w: {
            p: sorted(m.extension(w, p), key=obj_order.__getitem__)
            for p in sorted(m.language[w].predicates)
        }
        for w in m.states
    }
    out["concept_defs"] = {
        w: {c: m.concept_defs[w, c].text() for c in sorted(m.language[w].concepts)}
        for w in m.states
    }
    if m.economy is not None:
        e = m.economy
        out["utilities"] = {
            a: {
                w: {d: format_rational(e.u(int(a), w, d)) for d in m.sig.objects}
                for w in m.states
            }
            for a in agents
        }
        out["endowments"] = {"1": list(e.endow1), "2": list(e.endow2)}
    return out


def load_model(path, check: bool = True) -> Model:
    """Load and validate a model file; ``model.economy`` holds any utilities."""
    with open(Path(path), encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as e:
            raise SchemaError(f"invalid JSON: {e}") from None
    return from_dict(data, check=check)


def dumps_model(m: Model) -> str:
    return json.dumps(to_dict(m), indent=2, ensure_ascii=False)


def save_model(m: Model, path) -> None:
    Path(path).write_text(dumps_model(m) + "\n", encoding="utf-8")
