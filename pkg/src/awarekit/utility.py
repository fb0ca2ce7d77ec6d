"""Property/concept profiles and audits of the utility assumptions.

    A1     equal full property profiles            => equal utility
    A1con  equal full property and concept profiles => equal utility
    A2     equal aware property and concept profiles => equal utility
    A3     equal aware property profiles            => equal utility

Utilities are compared exactly (Fractions).  Witness search runs over
agents, then states in declared order, then objects in declared order,
pairing each (state, object) only with later ones.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, NamedTuple

from awarekit.model import Economy, Model, format_rational

ASSUMPTIONS = ("A1", "A1con", "A2", "A3")


class Profile(NamedTuple):
    props: frozenset
    cons: frozenset


def prop_profile(m: Model, state: str, obj: str) -> frozenset:
    """In-language predicates that hold of ``obj`` at ``state``."""
    return frozenset(p for p in m.language[state].predicates if obj in m.extension(state, p))


def con_profile(m: Model, state: str, obj: str) -> frozenset:
    """In-language concepts whose definition holds of ``obj`` at ``state``."""
    ext = lambda p: obj in m.extension(state, p)  # noqa: E731
    return frozenset(
        c for c in m.language[state].concepts if m.concept_defs[state, c].value(ext)
    )


def aware_profiles(m: Model, agent: int, state: str, obj: str) -> Profile:
    a = m.aware(agent, state)
    return Profile(
        prop_profile(m, state, obj) & a.predicates, con_profile(m, state, obj) & a.concepts
    )


def profile_key(m: Model, which: str, agent: int, state: str, obj: str):
    """The profile an assumption says utility must factor through."""
    if which == "A1":
        return prop_profile(m, state, obj)
    if which == "A1con":
        return prop_profile(m, state, obj), con_profile(m, state, obj)
    if which == "A2":
        return aware_profiles(m, agent, state, obj)
    if which == "A3":
        return aware_profiles(m, agent, state, obj).props
    raise ValueError(f"unknown assumption {which!r}; expected one of {ASSUMPTIONS}")


@dataclass(frozen=True)
class Witness:
    agent: int
    state: str
    obj: str
    other_state: str
    other_obj: str
    u: Fraction
    u_other: Fraction

    def as_tuple(self) -> tuple:
        return (self.agent, self.state, self.obj, self.other_state, self.other_obj, self.u, self.u_other)

    def as_dict(self) -> dict:
        return {
            "agent": self.agent,
            "state": self.state,
            "object": self.obj,
            "other_state": self.other_state,
            "other_object": self.other_obj,
            "u": format_rational(self.u),
            "u_other": format_rational(self.u_other),
        }

    def __str__(self) -> str:
        return (
            f"agent {self.agent}: U({self.state},{self.obj}) = {format_rational(self.u)} but "
            f"U({self.other_state},{self.other_obj}) = {format_rational(self.u_other)}"
        )


UtilityLike = Economy | Mapping | Callable


def _ufunc(m: Model, utilities: UtilityLike | None):
    if utilities is None:
        utilities = m.require_economy()
    if isinstance(utilities, Economy):
        return utilities.u
    if callable(utilities):
        return utilities
    return lambda i, w, d: utilities[i, w, d]


def check_assumption(m: Model, utilities: UtilityLike | None, which: str) -> Witness | None:
    """None if the assumption holds, else the first witness in search order."""
    u = _ufunc(m, utilities)
    pairs = [(w, d) for w in m.states for d in m.sig.objects]
    for i in m.agents:
        keyed = [(profile_key(m, which, i, w, d), w, d, u(i, w, d)) for w, d in pairs]
        for k, (key, w, d, val) in enumerate(keyed):
            for key2, w2, d2, val2 in keyed[k + 1 :]:
                if key == key2 and val != val2:
                    return Witness(i, w, d, w2, d2, val, val2)
    return None


def audit(m: Model, utilities: UtilityLike | None = None) -> dict:
    """Witness (or None) for each of A1, A2, A3."""
    return {a: check_assumption(m, utilities, a) for a in ("A1", "A2", "A3")}
