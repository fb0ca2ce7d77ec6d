"""Brute-force references and random instances.

Nothing here is clever on purpose: sentence enumeration is a size-indexed
closure of the grammar, the distinguisher scans it, and the contract search
tries every map from cells to allocations.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from awarekit.budget import Budget
from awarekit.contracts import (
    CellPartition,
    basis_partition,
    endowment_pairs,
    outside_option,
    scope_of,
)
from awarekit.errors import BudgetExceeded
from awarekit.model import Economy, LanguageSlice, Model, check_model
from awarekit.semantics import EvalContext
from awarekit.syntax import (
    And,
    Atom,
    Aware,
    BooleanConcept,
    Concept,
    ForAllObj,
    ForAllPred,
    Formula,
    Knows,
    Name,
    Not,
    ObjVar,
    Or,
    Pred,
    PredVar,
    Signature,
    symbols_of,
)
from awarekit.utility import profile_key

# ------------------------------------------------------------- enumeration


@dataclass(frozen=True)
class EnumerationBudget:
    max_size: int = 6
    max_modal_depth: int = 1
    max_quant_nesting: int = 1

    def __post_init__(self):
        if self.max_size < 1 or self.max_modal_depth < 0 or self.max_quant_nesting < 0:
            raise ValueError("enumeration budget must be positive")

    @classmethod
    def from_budget(cls, b: Budget) -> "EnumerationBudget":
        return cls(b.max_size, b.max_modal_depth, b.max_quant_nesting)


BOOLEAN_ONLY = EnumerationBudget(max_size=5, max_modal_depth=0, max_quant_nesting=0)


class _Enumerator:
    """Formulas by exact size over a fixed context of bound variables.

    Bound variables are named by binder depth (x1, x2, ... and X1, X2, ...),
    so alpha-variants never appear twice.  Conjunctions are kept only with
    the left operand first in enumeration order, and binders must bind.
    """

    def __init__(self, sig: Signature, slc: LanguageSlice, agents: Sequence[int], budget):
        self.sig, self.slc, self.agents, self.budget = sig, slc, tuple(agents), budget
        self.memo: dict = {}

    def heads(self, pvars):
        return (
            [Pred(p) for p in self.sig.predicates if p in self.slc.predicates]
            + [Concept(c) for c in self.sig.concepts if c in self.slc.concepts]
            + [PredVar(v) for v in pvars]
        )

    def of_size(self, n: int, ov: tuple, pv: tuple, md: int, qd: int) -> list:
        key = (n, ov, pv, md, qd)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        out: list = []
        if n == 1:
            args = [Name(d) for d in self.sig.objects] + [ObjVar(v) for v in ov]
            out = [Atom(h, a) for h in self.heads(pv) for a in args]
        else:
            out += [Not(f) for f in self.of_size(n - 1, ov, pv, md, qd)]
            for nl in range(1, n - 1):
                nr = n - 1 - nl
                if nl > nr:
                    break
                left = self.of_size(nl, ov, pv, md, qd)
                right = self.of_size(nr, ov, pv, md, qd)
                for a, l in enumerate(left):
                    start = a if nl == nr else 0
                    for r in right[start:]:
                        out.append(And(l, r))
            if qd > 0:
                x = f"x{len(ov) + 1}"
                for body in self.of_size(n - 1, ov + (x,), pv, md, qd - 1):
                    if x in symbols_of(body).free_obj_vars:
                        out.append(ForAllObj(x, body))
                X = f"X{len(pv) + 1}"
                for body in self.of_size(n - 1, ov, pv + (X,), md, qd - 1):
                    if X in symbols_of(body).free_pred_vars:
                        out.append(ForAllPred(X, body))
            if md > 0:
                for body in self.of_size(n - 1, ov, pv, md - 1, qd):
                    for i in self.agents:
                        out.append(Aware(i, body))
                        out.append(Knows(i, body))
        self.memo[key] = out
        return out


def enumerate_sentences(
    sig: Signature,
    slc: LanguageSlice,
    budget: EnumerationBudget = EnumerationBudget(),
    agents: Sequence[int] | None = None,
) -> Iterator[Formula]:
    """Every sentence of the slice's language within budget, by size."""
    agents = range(1, sig.agents + 1) if agents is None else agents
    e = _Enumerator(sig, slc, agents, budget)
    for n in range(1, budget.max_size + 1):
        yield from e.of_size(n, (), (), budget.max_modal_depth, budget.max_quant_nesting)


def distinguish(
    m: Model | EvalContext,
    w: str,
    w2: str,
    slc: LanguageSlice,
    budget: EnumerationBudget = EnumerationBudget(),
) -> Formula | None:
    """The first enumerated sentence true at exactly one of ``w``, ``w2``.

    None only means nothing was found within the budget.
    """
    ctx = m if isinstance(m, EvalContext) else EvalContext(m)
    if w == w2:
        return None
    for phi in enumerate_sentences(ctx.model.sig, slc, budget):
        if ctx.sat(w, phi) != ctx.sat(w2, phi):
            return phi
    return None


# -------------------------------------------------------- contract search


@dataclass
class Assignment:
    pairs: tuple  # per cell
    welfare: tuple  # (U_1, U_2) at the focal state
    acceptable: bool
    efficient: bool


@dataclass
class SearchResult:
    star: str
    partition: CellPartition
    scanned: int
    acceptable: list = field(default_factory=list)
    frontier: list = field(default_factory=list)

    def dominates(self, welfare: tuple) -> list:
        """Acceptable assignments whose focal welfare Pareto-dominates ``welfare``."""
        return [a for a in self.acceptable if _pareto_better(a.welfare, welfare)]


def _pareto_better(a: tuple, b: tuple) -> bool:
    return all(x >= y for x, y in zip(a, b)) and a != b


def exhaustive_contract_search(
    m: Model | EvalContext,
    star: str,
    economy: Economy | None = None,
    slc: LanguageSlice | None = None,
    mode: str = "full",
    budget: Budget = Budget(),
) -> SearchResult:
    """Score every map from the cells of K_1(star) + K_2(star) to allocations.

    An assignment is acceptable when each agent weakly beats the outside
    option at every state of their cell at ``star``, and efficient when no
    allocation Pareto-improves at ``star``.
    """
    ctx = m if isinstance(m, EvalContext) else EvalContext(m)
    mm = ctx.model
    econ = economy if economy is not None else mm.require_economy()
    if len(set(econ.endow1) | set(econ.endow2)) > budget.max_objects:
        raise BudgetExceeded(f"more than {budget.max_objects} endowed objects")
    part = basis_partition(ctx, star, scope_of(mm, star), mode, slc)
    n = len(part.cells)
    if n > budget.max_cells:
        raise BudgetExceeded(f"{n} cells exceed the search cap {budget.max_cells}")
    pairs = endowment_pairs(econ.endow1, econ.endow2, mm.sig.objects)
    star_cell = part.cell_of(star)
    u = econ.u

    # per (cell, pair): does every relevant state of that cell accept it?
    ok = {}
    for c, cell in enumerate(part.cells):
        for p in pairs:
            ok[c, p] = all(
                u(i, v, p[i - 1]) >= outside_option(econ, i, v)
                for i in (1, 2)
                for v in cell
                if v in mm.cell(i, star)
            )
    res = SearchResult(star, part, 0)
    for assign in itertools.product(pairs, repeat=n):
        res.scanned += 1
        if not all(ok[c, p] for c, p in enumerate(assign)):
            continue
        cur = assign[star_cell]
        welfare = (u(1, star, cur[0]), u(2, star, cur[1]))
        efficient = not any(
            _pareto_better((u(1, star, p[0]), u(2, star, p[1])), welfare) for p in pairs
        )
        res.acceptable.append(Assignment(assign, welfare, True, efficient))
    res.frontier = [
        a for a in res.acceptable if not any(_pareto_better(b.welfare, a.welfare) for b in res.acceptable)
    ]
    return res


# ------------------------------------------------------- random instances


@dataclass(frozen=True)
class Dims:
    states: int = 3
    predicates: int = 3
    objects: int = 2
    concepts: int = 1
    agents: int = 2


PRED_NAMES = ("P", "Q", "R", "S", "T", "U")


def random_signature(dims: Dims) -> Signature:
    return Signature(
        tuple(f"d{k + 1}" for k in range(dims.objects)),
        PRED_NAMES[: dims.predicates],
        tuple(f"C{k + 1}" for k in range(dims.concepts)),
        dims.agents,
    )


def _subset(rng: random.Random, items, p: float = 0.5) -> frozenset:
    return frozenset(x for x in items if rng.random() < p)


def _random_partition(rng: random.Random, states: Sequence[str]) -> tuple:
    labels = {}
    for w in states:
        labels.setdefault(rng.randrange(len(states)), []).append(w)
    return tuple(frozenset(b) for b in labels.values())


def random_bc(rng: random.Random, preds: Sequence[str]) -> BooleanConcept:
    preds = sorted(preds)
    k = rng.randint(1, len(preds))
    support = tuple(sorted(rng.sample(preds, k)))
    return BooleanConcept(support, rng.randrange(1 << (1 << k)))


def random_model(
    seed: int,
    dims: Dims = Dims(),
    star: str | None = None,
    common_at_star: bool = False,
    constant_on_scope: bool = False,
    full_awareness: bool = False,
    uniform_concepts: bool = False,
) -> Model:
    """A random model satisfying every structural invariant.

    ``common_at_star`` makes both agents equally aware at ``star``;
    ``constant_on_scope`` additionally keeps each agent's awareness constant
    on K_1(star) + K_2(star).  ``full_awareness`` makes every agent aware of
    the whole (then state-independent) language.  ``uniform_concepts`` gives
    each concept one definition, in the language everywhere.
    """
    rng = random.Random(seed)
    sig = random_signature(dims)
    states = tuple(f"w{k + 1}" for k in range(dims.states))
    star = star or states[0]
    preds, cons = sig.predicates, sig.concepts

    common = LanguageSlice(_subset(rng, preds), _subset(rng, cons, 0.6))
    # predicates present everywhere, so uniform definitions and common
    # concepts always have support
    core = set(common.predicates)
    if (uniform_concepts or common.concepts) and not core and preds:
        core = {rng.choice(preds)}
    if full_awareness or uniform_concepts:
        base_p = core | _subset(rng, preds, 0.6)
        base_c = set(common.concepts) | _subset(rng, cons, 0.7)
        if base_c and not base_p:
            base_p = {rng.choice(preds)}
        base = LanguageSlice(base_p, base_c)
    language = {}
    for w in states:
        if full_awareness:
            lang = base
        else:
            p = set(core) | _subset(rng, preds, 0.7)
            c = set(common.concepts) | _subset(rng, cons, 0.6)
            if uniform_concepts:
                p |= base.predicates
                c = set(base.concepts)
            if c and not p:
                p = {rng.choice(preds)}
            lang = LanguageSlice(p, c)
        language[w] = lang

    concept_defs = {}
    uniform = {}
    if uniform_concepts:
        shared = sorted(set.intersection(*(set(language[w].predicates) for w in states)))
        uniform = {c: random_bc(rng, shared) for c in cons if shared}
    for w in states:
        for c in language[w].concepts:
            concept_defs[w, c] = uniform[c] if c in uniform else random_bc(rng, language[w].predicates)

    extensions = {
        (w, p): _subset(rng, sig.objects) for w in states for p in language[w].predicates
    }

    partitions = {i: _random_partition(rng, states) for i in range(1, sig.agents + 1)}
    cell = {(i, w): b for i, bs in partitions.items() for b in bs for w in b}
    scope = cell[1, star] | cell[min(2, sig.agents), star]
    awareness = {}
    for i, blocks in partitions.items():
        for b in blocks:
            inter_p = set.intersection(*(set(language[w].predicates) for w in b))
            inter_c = set.intersection(*(set(language[w].concepts) for w in b))
            if full_awareness:
                a = language[next(iter(b))]
            elif (common_at_star and star in b) or (constant_on_scope and b & scope):
                a = common
            else:
                a = LanguageSlice(_subset(rng, inter_p, 0.6), _subset(rng, inter_c, 0.6))
            for w in b:
                awareness[i, w] = a
    m = Model(sig, states, language, awareness, partitions, extensions, concept_defs)
    check_model(m)
    return m


def random_utilities(
    m: Model,
    seed: int,
    assumption: str | None = "A2",
    values: Sequence[Fraction] = tuple(Fraction(n, d) for n in range(0, 5) for d in (1, 2)),
) -> dict:
    """Utilities that factor through the assumption's profile map.

    ``assumption=None`` draws every utility independently.
    """
    rng = random.Random(seed)
    out = {}
    table: dict = {}
    for i in m.agents:
        for w in m.states:
            for d in m.sig.objects:
                if assumption is None:
                    out[i, w, d] = rng.choice(values)
                    continue
                key = (i, profile_key(m, assumption, i, w, d))
                if key not in table:
                    table[key] = rng.choice(values)
                out[i, w, d] = table[key]
    return out


def random_endowments(m: Model, seed: int) -> tuple[tuple, tuple]:
    rng = random.Random(seed)
    objs = list(m.sig.objects)
    rng.shuffle(objs)
    k1 = rng.randint(1, len(objs) - 1)
    k2 = rng.randint(1, len(objs) - k1)
    order = {d: k for k, d in enumerate(m.sig.objects)}
    e1 = tuple(sorted(objs[:k1], key=order.__getitem__))
    e2 = tuple(sorted(objs[k1 : k1 + k2], key=order.__getitem__))
    return e1, e2


def random_economy(m: Model, seed: int, assumption: str | None = "A2") -> Economy:
    e1, e2 = random_endowments(m, seed + 7919)
    return Economy(random_utilities(m, seed, assumption), e1, e2)


# ------------------------------------------------------ random sentences


def random_formula(
    rng: random.Random,
    sig: Signature,
    slc: LanguageSlice | None = None,
    depth: int = 3,
    pred_quant: int = 1,
    ovars: tuple = (),
    pvars: tuple = (),
) -> Formula:
    """A random formula whose free variables are among ``ovars``/``pvars``."""
    preds = [p for p in sig.predicates if slc is None or p in slc.predicates]
    cons = [c for c in sig.concepts if slc is None or c in slc.concepts]
    heads = [Pred(p) for p in preds] + [Concept(c) for c in cons] + [PredVar(v) for v in pvars]

    def atom():
        if not heads:
            return _symbol_free(rng, sig)
        args = [Name(d) for d in sig.objects] + [ObjVar(v) for v in ovars]
        return Atom(rng.choice(heads), rng.choice(args))

    if depth <= 0:
        return atom()
    r = rng.random()
    sub = lambda **kw: random_formula(  # noqa: E731
        rng, sig, slc, depth - 1, kw.get("pq", pred_quant), kw.get("ov", ovars), kw.get("pv", pvars)
    )
    if r < 0.2:
        return atom()
    if r < 0.4:
        return Not(sub())
    if r < 0.6:
        return And(sub(), sub())
    if r < 0.7:
        x = f"x{len(ovars) + 1}"
        return ForAllObj(x, sub(ov=ovars + (x,)))
    if r < 0.8 and pred_quant > 0:
        X = f"X{len(pvars) + 1}"
        return ForAllPred(X, sub(pq=pred_quant - 1, pv=pvars + (X,)))
    i = rng.randint(1, sig.agents)
    return (Aware if rng.random() < 0.5 else Knows)(i, sub())


def _symbol_free(rng: random.Random, sig: Signature) -> Formula:
    # with no symbols to mention, a predicate quantifier still gives a sentence
    d = Name(rng.choice(sig.objects))
    return ForAllPred("Y0", Atom(PredVar("Y0"), d))


def random_sentence(rng: random.Random, sig: Signature, slc=None, depth: int = 3, pred_quant: int = 1):
    return random_formula(rng, sig, slc, depth, pred_quant)


def random_bc_formula(rng: random.Random, preds: Sequence[str], arg, depth: int = 3) -> Formula:
    """A random Boolean combination of ``P(arg)`` atoms (syntactic, unkeyed)."""
    if depth <= 0 or rng.random() < 0.25:
        return Atom(Pred(rng.choice(list(preds))), arg)
    r = rng.random()
    if r < 0.3:
        return Not(random_bc_formula(rng, preds, arg, depth - 1))
    if r < 0.65:
        return And(random_bc_formula(rng, preds, arg, depth - 1), random_bc_formula(rng, preds, arg, depth - 1))
    return Or(random_bc_formula(rng, preds, arg, depth - 1), random_bc_formula(rng, preds, arg, depth - 1))
