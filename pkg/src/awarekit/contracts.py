"""Contracts: verification predicates and the optimal-contract synthesizer.

A contract is a list of sentences (clauses) with an allocation ``(d1, d2)``
for each; agent 1 consumes ``d1`` and agent 2 consumes ``d2`` in any state
where that clause is the unique true one.

Synthesis partitions the relevant states by the truth of the agents'
commonly aware atomic sentences, picks per cell the least welfare-maximizing
allocation that beats both outside options, and writes one clause per cell
from separating literals.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from awarekit.errors import (
    AssumptionViolated,
    AwarenessMismatch,
    ContractError,
    MultipleTrueClauses,
    NoTrueClause,
    PreconditionFails,
    SameCellUtilityMismatch,
    SchemaError,
)
from awarekit.model import Economy, LanguageSlice, Model, format_rational
from awarekit.semantics import EvalContext, in_language, validity
from awarekit.syntax import (
    And,
    Atom,
    Aware,
    Concept,
    ForAllPred,
    Formula,
    Name,
    Not,
    Pred,
    PredVar,
    conj,
    disj,
    parse,
    render,
    symbols_of,
)
from awarekit.utility import check_assumption

Pair = tuple


# ---------------------------------------------------------------- contracts


@dataclass(frozen=True)
class Contract:
    clauses: tuple
    alloc: tuple

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(self.clauses))
        object.__setattr__(self, "alloc", tuple(tuple(p) for p in self.alloc))
        if not self.clauses:
            raise ContractError("a contract needs at least one clause")
        if len(self.clauses) != len(self.alloc):
            raise ContractError("clauses and allocations differ in length")
        for d1, d2 in self.alloc:
            if d1 == d2:
                raise ContractError(f"allocation ({d1}, {d2}) gives both agents the same object")

    def to_dict(self) -> dict:
        return {
            "clauses": [render(c) for c in self.clauses],
            "alloc": [list(p) for p in self.alloc],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False)

    @classmethod
    def from_dict(cls, data: dict, sig) -> "Contract":
        if set(data) != {"clauses", "alloc"}:
            raise SchemaError("contract needs exactly the keys 'clauses' and 'alloc'")
        alloc = data["alloc"]
        if not all(isinstance(p, list) and len(p) == 2 for p in alloc):
            raise SchemaError("each allocation is a two-element list")
        for p in alloc:
            for d in p:
                if d not in sig.objects:
                    raise SchemaError(f"undeclared object {d!r} in allocation")
        return cls(tuple(parse(t, sig) for t in data["clauses"]), tuple(map(tuple, alloc)))


def load_contract(path, sig) -> Contract:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    return Contract.from_dict(data, sig)


def endowment_pairs(end1: Sequence[str], end2: Sequence[str], order: Sequence[str] | None = None):
    """Ordered pairs of distinct objects from End_1 and End_2 together.

    Objects are ordered by ``order`` (the signature's object list) when
    given, else by first appearance in ``end1`` then ``end2``; pairs are
    lexicographic in that order.
    """
    if set(end1) & set(end2):
        raise ContractError(f"endowments overlap on {sorted(set(end1) & set(end2))}")
    if not end1 or not end2:
        raise ContractError("both endowments must be nonempty")
    union = list(end1) + list(end2)
    if order is not None:
        rank = {d: k for k, d in enumerate(order)}
        union.sort(key=rank.__getitem__)
    return [(a, b) for a in union for b in union if a != b]


def _pairs(m: Model, econ: Economy):
    return endowment_pairs(econ.endow1, econ.endow2, m.sig.objects)


def _econ(m: Model, economy: Economy | None) -> Economy:
    return economy if economy is not None else m.require_economy()


def _ctx(m) -> EvalContext:
    return m if isinstance(m, EvalContext) else EvalContext(m)


def tautology(slc: LanguageSlice, sig) -> Formula:
    """A sentence of the slice's language that is true wherever it is in the
    language."""
    preds = [p for p in sig.predicates if p in slc.predicates]
    d = Name(sig.objects[0])
    if preds:
        b = Atom(Pred(preds[0]), d)
        return Not(And(b, Not(b)))
    cons = [c for c in sig.concepts if c in slc.concepts]
    if cons:
        b = Atom(Concept(cons[0]), d)
        return Not(And(b, Not(b)))
    # awareness of a symbol-free sentence always holds
    return Aware(1, ForAllPred("Y", Atom(PredVar("Y"), d)))


def constant_contract(m: Model, pair: Pair, slc: LanguageSlice | None = None) -> Contract:
    slc = slc if slc is not None else LanguageSlice(m.sig.predicates, m.sig.concepts)
    return Contract((tautology(slc, m.sig),), (tuple(pair),))


# -------------------------------------------------------------- verification


@dataclass(frozen=True)
class ConditionReport:
    """Clause exhaustiveness (1) and exclusivity (2) as validities in the model."""

    exhaustive: bool
    exclusive: bool
    vacuous: bool
    exhaustive_failing: tuple = ()
    # (clause index, clause index, state)
    exclusive_failing: tuple = ()

    @property
    def ok(self) -> bool:
        return self.exhaustive and self.exclusive

    def __bool__(self) -> bool:
        return self.ok


def validate_contract(m: Model | EvalContext, k: Contract) -> ConditionReport:
    ctx = _ctx(m)
    v = validity(ctx, disj(list(k.clauses)))
    bad = []
    for a, b in itertools.combinations(range(len(k.clauses)), 2):
        vv = validity(ctx, Not(And(k.clauses[a], k.clauses[b])))
        bad += [(a, b, w) for w in vv.failing]
    return ConditionReport(v.valid, not bad, v.vacuous, v.failing, tuple(bad))


def true_clauses(m: Model | EvalContext, k: Contract, state: str) -> list[int]:
    ctx = _ctx(m)
    return [j for j, c in enumerate(k.clauses) if ctx.sat(state, c)]


def outcome(m: Model | EvalContext, k: Contract, state: str) -> Pair:
    hits = true_clauses(m, k, state)
    if not hits:
        raise NoTrueClause(state)
    if len(hits) > 1:
        raise MultipleTrueClauses(state, hits)
    return k.alloc[hits[0]]


def is_articulable(m: Model | EvalContext, k: Contract, star: str) -> bool:
    m = m.model if isinstance(m, EvalContext) else m
    common = m.aware(1, star)
    for i in m.agents:
        common = common & m.aware(i, star)
    return all(in_language(c, common) for c in k.clauses)


def is_efficient_at(
    m: Model | EvalContext, k: Contract, state: str, economy: Economy | None = None
) -> Pair | None:
    """None if efficient at ``state``, else the least Pareto-dominating pair."""
    ctx = _ctx(m)
    econ = _econ(ctx.model, economy)
    return dominating_pair(ctx.model, econ, state, outcome(ctx, k, state))


def dominating_pair(m: Model, econ: Economy, state: str, current: Pair) -> Pair | None:
    u = econ.u
    base = (u(1, state, current[0]), u(2, state, current[1]))
    for pair in _pairs(m, econ):
        new = (u(1, state, pair[0]), u(2, state, pair[1]))
        if new[0] >= base[0] and new[1] >= base[1] and new != base:
            return pair
    return None


def outside_option(econ: Economy, agent: int, state: str) -> Fraction:
    return max(econ.u(agent, state, d) for d in econ.endowments[agent])


def is_acceptable_at(
    m: Model | EvalContext,
    k: Contract,
    state: str,
    agent: int,
    economy: Economy | None = None,
    at_omega: bool = False,
) -> str | None:
    """None if acceptable for ``agent`` at ``state``, else the least failing
    state of the agent's cell.

    The allocation is taken at each cellmate; ``at_omega`` instead uses the
    allocation at ``state`` itself throughout the cell.
    """
    ctx = _ctx(m)
    mm = ctx.model
    econ = _econ(mm, economy)
    fixed = outcome(ctx, k, state) if at_omega else None
    for v in mm.sorted_states(mm.cell(agent, state)):
        got = fixed if at_omega else outcome(ctx, k, v)
        if econ.u(agent, v, got[agent - 1]) < outside_option(econ, agent, v):
            return v
    return None


@dataclass
class VerifyReport:
    state: str
    conditions: ConditionReport
    articulable: bool
    outcome: Pair | None
    dominating: Pair | None
    # agent -> failing state or None
    acceptable: dict
    errors: list = field(default_factory=list)

    @property
    def efficient(self) -> bool:
        return self.outcome is not None and self.dominating is None and not self.errors

    @property
    def ok(self) -> bool:
        return (
            self.conditions.ok
            and self.articulable
            and self.efficient
            and all(v is None for v in self.acceptable.values())
            and not self.errors
        )

    def as_dict(self) -> dict:
        return {
            "state": self.state,
            "conditions": {
                "exhaustive": self.conditions.exhaustive,
                "exclusive": self.conditions.exclusive,
                "vacuous": self.conditions.vacuous,
                "exhaustive_failing": list(self.conditions.exhaustive_failing),
                "exclusive_failing": [list(x) for x in self.conditions.exclusive_failing],
            },
            "articulable": self.articulable,
            "outcome": list(self.outcome) if self.outcome else None,
            "efficient": self.efficient,
            "dominating_pair": list(self.dominating) if self.dominating else None,
            "acceptable": {
                str(i): {"ok": v is None, "failing_state": v} for i, v in self.acceptable.items()
            },
            "errors": [{"error": e.code, "message": str(e)} for e in self.errors],
            "ok": self.ok,
        }


def verify(
    m: Model | EvalContext,
    k: Contract,
    state: str,
    economy: Economy | None = None,
    at_omega: bool = False,
) -> VerifyReport:
    """All four predicates at ``state``; outcome errors are collected, not raised."""
    ctx = _ctx(m)
    mm = ctx.model
    econ = _econ(mm, economy)
    errors: list = []
    out = dom = None
    try:
        out = outcome(ctx, k, state)
        dom = dominating_pair(mm, econ, state, out)
    except ContractError as e:
        errors.append(e)
    acc = {}
    for i in mm.agents:
        try:
            acc[i] = is_acceptable_at(ctx, k, state, i, econ, at_omega)
        except ContractError as e:
            errors.append(e)
            acc[i] = getattr(e, "state", state)
    return VerifyReport(state, validate_contract(ctx, k), is_articulable(mm, k, state), out, dom, acc, errors)


# ------------------------------------------------------------- partitioning


@dataclass(frozen=True)
class CellPartition:
    cells: tuple  # tuples of states, each sorted; cells ordered by least state
    basis: tuple  # basis sentences in fixed order
    rows: tuple  # per cell, the truth value of each basis sentence

    def cell_of(self, state: str) -> int:
        for j, c in enumerate(self.cells):
            if state in c:
                return j
        raise KeyError(state)


def common_awareness(m: Model, star: str) -> LanguageSlice:
    a1, a2 = m.aware(1, star), m.aware(2, star)
    if a1 != a2:
        raise AwarenessMismatch(star, (a1 - a2).symbols, (a2 - a1).symbols)
    return a1


def scope_of(m: Model, star: str) -> list[str]:
    """K_1(star) together with K_2(star), in state order."""
    return m.sorted_states(m.cell(1, star) | m.cell(2, star))


def basis_sentences(m: Model, slc: LanguageSlice, mode: str = "full") -> list[Formula]:
    if mode not in ("full", "bc"):
        raise ValueError(f"mode must be 'full' or 'bc', not {mode!r}")
    out = [
        Atom(Pred(p), Name(d))
        for p in m.sig.predicates
        if p in slc.predicates
        for d in m.sig.objects
    ]
    if mode == "full":
        out += [
            Atom(Concept(c), Name(d))
            for c in m.sig.concepts
            if c in slc.concepts
            for d in m.sig.objects
        ]
    return out


def basis_partition(
    m: Model | EvalContext,
    star: str,
    scope: Sequence[str] | None = None,
    mode: str = "full",
    slc: LanguageSlice | None = None,
) -> CellPartition:
    """Group ``scope`` by agreement on every basis sentence.

    Without an explicit slice the agents must be equally aware at ``star``.
    """
    ctx = _ctx(m)
    mm = ctx.model
    if slc is None:
        slc = common_awareness(mm, star)
    scope = mm.sorted_states(scope if scope is not None else scope_of(mm, star))
    basis = basis_sentences(mm, slc, mode)
    groups: dict = {}
    for w in scope:
        row = tuple(ctx.sat(w, b) for b in basis)
        groups.setdefault(row, []).append(w)
    cells = sorted(groups.items(), key=lambda kv: mm.index(kv[1][0]))
    return CellPartition(
        tuple(tuple(c) for _, c in cells), tuple(basis), tuple(r for r, _ in cells)
    )


# --------------------------------------------------------------- synthesis


@dataclass
class Synthesis:
    contract: Contract
    star: str
    mode: str
    scope: tuple
    partition: CellPartition
    # cell index -> agent -> representative state
    reps: dict
    # cell index -> pair
    kappa: dict

    def outcomes(self) -> dict:
        return {w: self.kappa[j] for j, c in enumerate(self.partition.cells) for w in c}


def awareness_deviation(m: Model, states) -> tuple | None:
    """Awareness constancy of each agent over ``states``; the first
    ``(agent, state)`` deviating from the first state, or None."""
    states = m.sorted_states(states)
    for i in m.agents:
        for w in states[1:]:
            if m.aware(i, w) != m.aware(i, states[0]):
                return i, w
    return None


def synthesis_scope(m: Model, star: str) -> list[str]:
    """States the synthesized contract must get right.

    W = K_1(star) + K_2(star) always.  When awareness is constant on W the
    cells of every state of W are added, so acceptability can hold at every
    state of W and not only at star.
    """
    w = scope_of(m, star)
    if awareness_deviation(m, w) is not None:
        return w
    out = set()
    for v in w:
        for i in m.agents:
            out |= m.cell(i, v)
    return m.sorted_states(out)


def cell_representative(m: Model, agent: int, star: str, cell: Sequence[str], slc) -> str:
    in_k = [w for w in cell if w in m.cell(agent, star)]
    if in_k:
        return in_k[0]
    same = [w for w in cell if m.aware(agent, w) == slc]
    return same[0] if same else cell[0]


def _check_same_cell(m, econ, agent, cell, rep, slc) -> None:
    for w in cell:
        if m.aware(agent, w) != slc:
            continue
        for d in m.sig.objects:
            if econ.u(agent, w, d) != econ.u(agent, rep, d):
                raise SameCellUtilityMismatch(
                    f"agent {agent}: U({w},{d}) = {format_rational(econ.u(agent, w, d))} but "
                    f"U({rep},{d}) = {format_rational(econ.u(agent, rep, d))} in one cell"
                )


def best_pair(m: Model, econ: Economy, rep: dict) -> Pair:
    """Least welfare-maximizing pair meeting both outside options, with
    agent i's utilities read at ``rep[i]``."""
    best = best_w = None
    floors = {i: outside_option(econ, i, rep[i]) for i in (1, 2)}
    for pair in _pairs(m, econ):
        u1 = econ.u(1, rep[1], pair[0])
        u2 = econ.u(2, rep[2], pair[1])
        if u1 < floors[1] or u2 < floors[2]:
            continue
        if best is None or u1 + u2 > best_w:
            best, best_w = pair, u1 + u2
    assert best is not None  # each agent's best endowed object is always feasible
    return best


def _literal(b: Formula, value: bool) -> Formula:
    return b if value else Not(b)


def separating_clauses(part: CellPartition, slc: LanguageSlice, sig) -> tuple[list, Formula]:
    """One clause per cell, true exactly on that cell, plus the residual."""
    n = len(part.cells)
    if n == 1:
        lam = tautology(slc, sig)
        return [lam], Not(lam)
    psi = []
    for i in range(n):
        lits = []
        for j in range(n):
            if j == i:
                continue
            k = next(t for t in range(len(part.basis)) if part.rows[i][t] != part.rows[j][t])
            lit = _literal(part.basis[k], part.rows[i][k])
            if lit not in lits:
                lits.append(lit)
        psi.append(conj(lits))
    lams = [conj([psi[i]] + [Not(psi[j]) for j in range(n) if j != i]) for i in range(n)]
    return lams, conj([Not(l) for l in lams])


def synthesize(
    m: Model | EvalContext,
    star: str,
    mode: str = "full",
    economy: Economy | None = None,
    check_assumptions: bool = True,
) -> Synthesis:
    ctx = _ctx(m)
    mm = ctx.model
    econ = _econ(mm, economy)
    if mode not in ("full", "bc"):
        raise ValueError(f"mode must be 'full' or 'bc', not {mode!r}")
    slc = common_awareness(mm, star)
    if check_assumptions:
        which = "A2" if mode == "full" else "A3"
        w = check_assumption(mm, econ, which)
        if w is not None:
            raise AssumptionViolated(which, w)
    scope = synthesis_scope(mm, star)
    part = basis_partition(ctx, star, scope, mode, slc)
    reps, kappa = {}, {}
    for j, cell in enumerate(part.cells):
        reps[j] = {i: cell_representative(mm, i, star, cell, slc) for i in (1, 2)}
        for i in (1, 2):
            _check_same_cell(mm, econ, i, cell, reps[j][i], slc)
        kappa[j] = best_pair(mm, econ, reps[j])
    # bc clauses may not fall back on a concept even when one is aware
    clause_slc = slc if mode == "full" else LanguageSlice(slc.predicates, ())
    lams, residual = separating_clauses(part, clause_slc, mm.sig)
    pairs = _pairs(mm, econ)
    k = Contract(tuple(lams) + (residual,), tuple(kappa[j] for j in range(len(lams))) + (pairs[0],))
    return Synthesis(k, star, mode, tuple(scope), part, reps, kappa)


def synthesize_contract(
    m: Model | EvalContext, star: str, mode: str = "full", economy: Economy | None = None
) -> Contract:
    return synthesize(m, star, mode, economy).contract


# ------------------------------------------------------- scope-wide checks


@dataclass(frozen=True)
class ScopeFailure:
    state: str
    check: str  # "efficient" | "acceptable:<agent>" | "outcome"
    detail: object = None


def verify_theorem1b(
    m: Model | EvalContext,
    star: str,
    k: Contract,
    economy: Economy | None = None,
    at_omega: bool = False,
) -> ScopeFailure | None:
    """Efficiency and acceptability at every state of K_1(star) + K_2(star).

    Raises PreconditionFails when some agent's awareness is not constant there.
    """
    ctx = _ctx(m)
    mm = ctx.model
    econ = _econ(mm, economy)
    w = scope_of(mm, star)
    bad = awareness_deviation(mm, w)
    if bad is not None:
        raise PreconditionFails(bad[0], w[0], bad[1])
    for v in w:
        try:
            dom = is_efficient_at(ctx, k, v, econ)
        except ContractError as e:
            return ScopeFailure(v, "outcome", str(e))
        if dom is not None:
            return ScopeFailure(v, "efficient", dom)
        for i in mm.agents:
            try:
                f = is_acceptable_at(ctx, k, v, i, econ, at_omega)
            except ContractError as e:
                return ScopeFailure(v, "outcome", str(e))
            if f is not None:
                return ScopeFailure(v, f"acceptable:{i}", f)
    return None


def mentions_concepts(k: Contract) -> bool:
    return any(symbols_of(c).concepts for c in k.clauses)
