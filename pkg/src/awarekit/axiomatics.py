"""The AX axiom system: schema recognizers, a Hilbert proof checker and a
soundness fuzzer.

Schemas are matched against the desugared AST, so ``a -> b`` is recognized
as ``!(a & !b)`` and ``a <-> b`` as the conjunction of both implications.
Comparisons between formulas are up to renaming of bound variables.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

from awarekit.budget import Budget
from awarekit.errors import BudgetExceeded, FinRequiresFiniteObjects
from awarekit.model import Model
from awarekit.oracle import Dims, random_bc_formula, random_formula, random_model
from awarekit.semantics import EvalContext, validity
from awarekit.syntax import (
    And,
    Atom,
    Aware,
    BooleanConcept,
    Concept,
    ForAllObj,
    ForAllPred,
    Formula,
    Iff,
    Implies,
    Knows,
    Name,
    Not,
    ObjVar,
    Pred,
    PredVar,
    Signature,
    Top,
    abstract_name,
    abstract_pred,
    alpha_equal,
    bc_argument,
    canonical,
    conj,
    flatten_and,
    match_exists_pred,
    match_iff,
    match_implies,
    parse,
    render,
    substitute_obj,
    substitute_pred,
    symbols_of,
)

AXIOMS = (
    "Prop",
    "AGP",
    "KA",
    "K",
    "T",
    "4",
    "5",
    "A0",
    "Con",
    "1_x",
    "1_X",
    "K_x",
    "K_X",
    "N_x",
    "N_X",
    "Barcan_x",
    "Barcan_X",
    "FA_X",
    "Fin_x",
)
RULES = ("MP", "Gen_K", "Gen_x", "Gen_X")

_ALIASES = {
    "1forallx": "1_x",
    "1forallX": "1_X",
    "Kforallx": "K_x",
    "KforallX": "K_X",
    "Nforallx": "N_x",
    "NforallX": "N_X",
    "Genforallx": "Gen_x",
    "GenforallX": "Gen_X",
    "GenK": "Gen_K",
}


def normalize_name(name: str) -> str:
    """Map spellings such as ``1_forall_x`` or ``GenK`` to the canonical name."""
    if name in AXIOMS or name in RULES:
        return name
    squashed = name.replace("_", "").replace("∀", "forall")
    for canon in AXIOMS + RULES:
        if squashed == canon.replace("_", ""):
            return canon
    return _ALIASES.get(squashed, name)


@dataclass(frozen=True)
class ProofContext:
    sig: Signature
    objects_finite: bool = True


# ------------------------------------------------------------- tautologies

MAX_LETTERS = 20


def _letters(phi: Formula, table: dict) -> Callable:
    """Compile ``phi`` to a function of a letter valuation; non-Boolean
    subformulas become letters, identified up to bound renaming."""
    if isinstance(phi, Not):
        f = _letters(phi.body, table)
        return lambda v: not f(v)
    if isinstance(phi, And):
        a, b = _letters(phi.left, table), _letters(phi.right, table)
        return lambda v: a(v) and b(v)
    if isinstance(phi, Top):
        return lambda v: True
    key = canonical(phi)
    k = table.setdefault(key, len(table))
    return lambda v: v[k]


def is_prop_tautology_instance(phi: Formula, max_letters: int = MAX_LETTERS) -> bool:
    table: dict = {}
    f = _letters(phi, table)
    n = len(table)
    if n > max_letters:
        raise BudgetExceeded(f"{n} propositional letters exceed the cap {max_letters}")
    return all(f(v) for v in itertools.product((False, True), repeat=n))


# --------------------------------------------------------------- matching


def _imp(phi):
    return match_implies(phi)


def _eq(a: Formula, b: Formula) -> bool:
    return alpha_equal(a, b)


def _is_agp(phi: Formula, ctx) -> bool:
    iff = match_iff(phi)
    if iff is None:
        # empty right-hand side: bare A_i of a symbol-free formula
        if isinstance(phi, Aware):
            s = symbols_of(phi.body)
            return not s.predicates and not s.concepts
        return False
    for lhs, rhs in (iff, iff[::-1]):
        if not isinstance(lhs, Aware):
            continue
        parts = flatten_and(rhs)
        if not all(isinstance(p, Aware) and p.agent == lhs.agent for p in parts):
            continue
        atoms = [p.body for p in parts]
        if not all(isinstance(a, Atom) and isinstance(a.arg, ObjVar) for a in atoms):
            continue
        if len({a.arg for a in atoms}) != 1:
            continue
        if not all(isinstance(a.head, (Pred, Concept)) for a in atoms):
            continue
        s = symbols_of(lhs.body)
        want = {("P", p) for p in s.predicates} | {("C", c) for c in s.concepts}
        got = [("P" if isinstance(a.head, Pred) else "C", a.head.name) for a in atoms]
        if len(got) == len(set(got)) and set(got) == want:
            return True
    return False


def _is_ka(phi, ctx):
    m = _imp(phi)
    return (
        m is not None
        and isinstance(m[0], Aware)
        and isinstance(m[1], Knows)
        and m[1].agent == m[0].agent
        and m[1].body == m[0]
    )


def _is_k(phi, ctx):
    m = _imp(phi)
    if m is None or not isinstance(m[0], And) or not isinstance(m[1], Knows):
        return False
    a, b = m[0].left, m[0].right
    if not (isinstance(a, Knows) and isinstance(b, Knows)):
        return False
    i = m[1].agent
    inner = _imp(b.body)
    return (
        a.agent == b.agent == i
        and inner is not None
        and _eq(inner[0], a.body)
        and _eq(inner[1], m[1].body)
    )


def _is_t(phi, ctx):
    m = _imp(phi)
    return m is not None and isinstance(m[0], Knows) and _eq(m[0].body, m[1])


def _is_4(phi, ctx):
    m = _imp(phi)
    return (
        m is not None
        and isinstance(m[0], Knows)
        and isinstance(m[1], Knows)
        and m[1].agent == m[0].agent
        and _eq(m[1].body, m[0])
    )


def _is_5(phi, ctx):
    m = _imp(phi)
    if m is None or not isinstance(m[0], And) or not isinstance(m[1], Knows):
        return False
    nk, aw = m[0].left, m[0].right
    if not (isinstance(nk, Not) and isinstance(nk.body, Knows) and isinstance(aw, Aware)):
        return False
    i = nk.body.agent
    return aw.agent == i and m[1].agent == i and _eq(aw.body, nk.body.body) and _eq(m[1].body, nk)


def _is_a0(phi, ctx):
    m = _imp(phi)
    return (
        m is not None
        and isinstance(m[0], Knows)
        and isinstance(m[1], Aware)
        and m[0].agent == m[1].agent
        and _eq(m[0].body, m[1].body)
    )


def _is_con(phi, ctx):
    ex = match_exists_pred(phi)
    if ex is None:
        return False
    X, body = ex
    if not isinstance(body, ForAllObj):
        return False
    x = body.var
    iff = match_iff(body.body)
    if iff is None:
        return False
    c, y = iff
    return (
        isinstance(c, Atom)
        and isinstance(c.head, Concept)
        and c.arg == ObjVar(x)
        and y == Atom(PredVar(X), ObjVar(x))
    )


def _is_1x(phi, ctx):
    m = _imp(phi)
    if m is None or not isinstance(m[0], ForAllObj):
        return False
    q = m[0]
    return any(_eq(substitute_obj(q.body, q.var, c), m[1]) for c in ctx.sig.objects)


def _match_pred_subst(pat: Formula, got: Formula, var: str, found: dict) -> bool:
    """Does ``got`` equal ``pat`` with free ``var`` replaced by one template?"""
    if isinstance(pat, Atom) and pat.head == PredVar(var):
        if isinstance(got, Atom) and isinstance(got.head, Concept):
            if got.arg != pat.arg:
                return False
            tmpl = Atom(got.head, ObjVar("#"))
        else:
            try:
                arg = bc_argument(got)
            except ValueError:
                return False
            if arg is not None and arg != pat.arg:
                return False
            if not symbols_of(got).predicates:
                return False
            tmpl = _retarget(got, pat.arg)
        prev = found.setdefault("t", tmpl)
        return prev == tmpl
    if type(pat) is not type(got):
        return False
    if isinstance(pat, Atom):
        return pat == got
    if isinstance(pat, Top):
        return True
    if isinstance(pat, And):
        return _match_pred_subst(pat.left, got.left, var, found) and _match_pred_subst(
            pat.right, got.right, var, found
        )
    if isinstance(pat, (Aware, Knows)) and pat.agent != got.agent:
        return False
    if isinstance(pat, (ForAllObj, ForAllPred)):
        if pat.var != got.var:
            return False
        if isinstance(pat, ForAllPred) and pat.var == var:
            return pat == got
    return _match_pred_subst(pat.body, got.body, var, found)


def _retarget(f: Formula, arg) -> Formula:
    if isinstance(f, Atom):
        return Atom(f.head, ObjVar("#")) if f.arg == arg else f
    if isinstance(f, Not):
        return Not(_retarget(f.body, arg))
    if isinstance(f, And):
        return And(_retarget(f.left, arg), _retarget(f.right, arg))
    return f


def one_forall_pred_witness(phi: Formula):
    """For an instance of 1_X, the substituted template (a Boolean formula
    over ``#`` or a concept atom); ``Top()`` when X does not occur."""
    m = _imp(phi)
    if m is None or not isinstance(m[0], ForAllPred):
        return None
    q = m[0]
    if q.var not in symbols_of(q.body).free_pred_vars:
        return Top() if _eq(q.body, m[1]) else None
    found: dict = {}
    if _match_pred_subst(q.body, m[1], q.var, found):
        return found["t"]
    # fall back on bound renaming in the conclusion
    found = {}
    if _match_pred_subst(canonical(q.body), canonical(m[1]), q.var, found):
        return found["t"]
    return None


def _is_1X(phi, ctx):
    return one_forall_pred_witness(phi) is not None


def _k_quant(phi, kind):
    m = _imp(phi)
    if m is None or not isinstance(m[0], kind):
        return False
    inner = _imp(m[0].body)
    rhs = _imp(m[1])
    if inner is None or rhs is None:
        return False
    a, b = rhs
    v = m[0].var
    return (
        isinstance(a, kind)
        and isinstance(b, kind)
        and a.var == v
        and b.var == v
        and _eq(kind(v, inner[0]), a)
        and _eq(kind(v, inner[1]), b)
    )


def _n_quant(phi, kind):
    m = _imp(phi)
    if m is None or not isinstance(m[1], kind):
        return False
    s = symbols_of(m[0])
    free = s.free_obj_vars if kind is ForAllObj else s.free_pred_vars
    return m[1].var not in free and _eq(m[1].body, m[0])


def _is_barcan_x(phi, ctx):
    m = _imp(phi)
    if m is None:
        return False
    a, b = m
    return (
        isinstance(a, ForAllObj)
        and isinstance(a.body, Knows)
        and isinstance(b, Knows)
        and b.agent == a.body.agent
        and _eq(ForAllObj(a.var, a.body.body), b.body)
    )


def _is_barcan_X(phi, ctx):
    m = _imp(phi)
    if m is None or not isinstance(m[0], And) or not isinstance(m[1], Knows):
        return False
    aw, q = m[0].left, m[0].right
    if not (isinstance(aw, Aware) and isinstance(aw.body, ForAllPred) and isinstance(q, ForAllPred)):
        return False
    i, X, body = aw.agent, aw.body.var, aw.body.body
    inner = _imp(q.body)
    if q.var != X or inner is None:
        return False
    ac, kn = inner
    if not (
        isinstance(ac, Aware)
        and ac.agent == i
        and isinstance(ac.body, Atom)
        and ac.body.head == PredVar(X)
        and isinstance(ac.body.arg, Name)
        and kn == Knows(i, body)
    ):
        return False
    c = ac.body.arg
    want = Knows(i, Implies(ForAllPred(X, Aware(i, Atom(PredVar(X), c))), ForAllPred(X, body)))
    return m[1] == want


def _is_fa_X(phi, ctx):
    m = _imp(phi)
    if m is None:
        return False
    a, b = m
    if not (isinstance(a, ForAllPred) and isinstance(a.body, Not) and isinstance(a.body.body, Aware)):
        return False
    aw = a.body.body
    return (
        isinstance(aw.body, Atom)
        and aw.body.head == PredVar(a.var)
        and isinstance(aw.body.arg, Name)
        and b == Knows(aw.agent, a)
    )


def fin_instance(phi_body: Formula, x: str, sig: Signature) -> Formula:
    return Iff(
        ForAllObj(x, phi_body), conj([substitute_obj(phi_body, x, c) for c in sig.objects])
    )


def _is_fin_x(phi, ctx):
    iff = match_iff(phi)
    if iff is None or not isinstance(iff[0], ForAllObj):
        return False
    q = iff[0]
    want = conj([substitute_obj(q.body, q.var, c) for c in ctx.sig.objects])
    return _eq(want, iff[1])


RECOGNIZERS = {
    "Prop": lambda f, c: _safe_prop(f),
    "AGP": _is_agp,
    "KA": _is_ka,
    "K": _is_k,
    "T": _is_t,
    "4": _is_4,
    "5": _is_5,
    "A0": _is_a0,
    "Con": _is_con,
    "1_x": _is_1x,
    "1_X": _is_1X,
    "K_x": lambda f, c: _k_quant(f, ForAllObj),
    "K_X": lambda f, c: _k_quant(f, ForAllPred),
    "N_x": lambda f, c: _n_quant(f, ForAllObj),
    "N_X": lambda f, c: _n_quant(f, ForAllPred),
    "Barcan_x": _is_barcan_x,
    "Barcan_X": _is_barcan_X,
    "FA_X": _is_fa_X,
    "Fin_x": _is_fin_x,
}


def _safe_prop(f):
    try:
        return is_prop_tautology_instance(f)
    except BudgetExceeded:
        return False


def is_instance(phi: Formula, name: str, ctx: ProofContext) -> bool:
    if name == "Fin_x" and not ctx.objects_finite:
        raise FinRequiresFiniteObjects("Fin_x needs a finite list of standard names")
    return bool(RECOGNIZERS[name](phi, ctx))


def recognize_axiom(phi: Formula, ctx: ProofContext) -> set[str]:
    out = set()
    for name, rec in RECOGNIZERS.items():
        if name == "Fin_x" and not ctx.objects_finite:
            continue
        if rec(phi, ctx):
            out.add(name)
    return out


# ------------------------------------------------------------------ proofs


@dataclass(frozen=True)
class ProofLine:
    formula: Formula
    by: str
    refs: tuple = ()
    const: str | None = None
    pred: str | None = None


@dataclass(frozen=True)
class ProofFailure:
    line: int  # 1-based
    reason: str
    message: str

    def as_dict(self) -> dict:
        return {"line": self.line, "reason": self.reason, "message": self.message}


def _rule(line: ProofLine, k: int, lines: Sequence[ProofLine], ctx: ProofContext):
    """Reason string if the rule application at 1-based line ``k`` is wrong."""
    by = line.by
    need = {"MP": 2, "Gen_K": 1, "Gen_x": 1, "Gen_X": 1}[by]
    if len(line.refs) != need:
        return "BadReference", f"{by} cites {need} line(s), got {len(line.refs)}"
    for r in line.refs:
        if r >= k:
            return "ForwardReference", f"line {k} cites line {r}, which does not precede it"
        if r < 1:
            return "BadReference", f"no line {r}"
    prem = [lines[r - 1].formula for r in line.refs]
    phi = line.formula
    if by == "MP":
        for a, b in (prem, prem[::-1]):
            m = _imp(b)
            if m is not None and _eq(m[0], a) and _eq(m[1], phi):
                return None
        return "BadRule", "MP needs a line and an implication from it to this line"
    if by == "Gen_K":
        p = prem[0]
        if not isinstance(phi, Knows):
            return "BadRule", "Gen_K concludes K_i phi"
        want = And(phi.body, Aware(phi.agent, phi.body))
        return None if _eq(p, want) else ("BadRule", "Gen_K cites a line of the form phi & A_i phi")
    if by == "Gen_x":
        c = line.const
        if c is None or c not in ctx.sig.objects:
            return "BadRule", "Gen_x needs a declared standard name in 'const'"
        if not isinstance(phi, ForAllObj):
            return "BadRule", "Gen_x concludes forall x. phi[c/x]"
        if phi.var in symbols_of(prem[0]).free_obj_vars:
            return "BadRule", f"{phi.var} already occurs free in the cited line"
        want = ForAllObj(phi.var, abstract_name(prem[0], c, phi.var))
        return None if _eq(want, phi) else ("BadRule", "not the generalization of the cited line")
    if by == "Gen_X":
        p = line.pred
        if p is None or p not in ctx.sig.predicates:
            return "BadRule", "Gen_X needs a declared predicate in 'pred'"
        if not isinstance(phi, ForAllPred):
            return "BadRule", "Gen_X concludes forallp X. phi[P/X]"
        if phi.var in symbols_of(prem[0]).free_pred_vars:
            return "BadRule", f"{phi.var} already occurs free in the cited line"
        want = ForAllPred(phi.var, abstract_pred(prem[0], p, phi.var))
        return None if _eq(want, phi) else ("BadRule", "not the generalization of the cited line")
    raise AssertionError(by)


def check_proof(lines: Sequence[ProofLine], ctx: ProofContext) -> ProofFailure | None:
    """None if every line is justified, else the first bad line."""
    for k, line in enumerate(lines, start=1):
        by = normalize_name(line.by)
        line = ProofLine(line.formula, by, tuple(line.refs), line.const, line.pred)
        if by in AXIOMS:
            if line.refs:
                return ProofFailure(k, "BadReference", f"axiom {by} cites no lines")
            if by == "Fin_x" and not ctx.objects_finite:
                return ProofFailure(
                    k, "FinRequiresFiniteObjects", "Fin_x needs a finite list of standard names"
                )
            if not is_instance(line.formula, by, ctx):
                return ProofFailure(k, "NotAnInstance", f"not an instance of {by}")
        elif by in RULES:
            bad = _rule(line, k, lines, ctx)
            if bad is not None:
                return ProofFailure(k, *bad)
        else:
            return ProofFailure(k, "UnknownJustification", f"unknown justification {line.by!r}")
    return None


def parse_proof(data: list, ctx: ProofContext) -> list[ProofLine]:
    if not isinstance(data, list):
        raise ValueError("a proof is a JSON array of lines")
    out = []
    for k, item in enumerate(data, start=1):
        extra = set(item) - {"formula", "by", "refs", "const", "pred"}
        if extra or "formula" not in item or "by" not in item:
            raise ValueError(f"line {k}: expected keys formula, by, refs, const, pred")
        out.append(
            ProofLine(
                parse(item["formula"], ctx.sig),
                item["by"],
                tuple(item.get("refs", ())),
                item.get("const"),
                item.get("pred"),
            )
        )
    return out


def proof_to_json(lines: Sequence[ProofLine]) -> list:
    out = []
    for l in lines:
        d = {"formula": render(l.formula), "by": l.by, "refs": list(l.refs)}
        if l.const is not None:
            d["const"] = l.const
        if l.pred is not None:
            d["pred"] = l.pred
        out.append(d)
    return out


def load_signature(path) -> tuple[Signature, bool]:
    """A signature file; ``"finite": false`` marks an infinite object supply."""
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    extra = set(data) - {"agents", "objects", "predicates", "concepts", "finite"}
    if extra:
        raise ValueError(f"unknown signature keys {sorted(extra)}")
    return Signature.from_dict(data), bool(data.get("finite", True))


def load_proof(path, ctx: ProofContext) -> list[ProofLine]:
    return parse_proof(json.loads(Path(path).read_text(encoding="utf-8")), ctx)


# ---------------------------------------------------------------- fuzzing


@dataclass
class FuzzReport:
    schema: str
    trials: int
    vacuous: int = 0
    countermodels: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.countermodels


def close(phi: Formula, sig: Signature) -> Formula:
    """Close free variables: objects by the least standard name, predicate
    variables by the first declared predicate."""
    s = symbols_of(phi)
    for x in sorted(s.free_obj_vars):
        phi = substitute_obj(phi, x, sig.objects[0])
    for X in sorted(s.free_pred_vars):
        phi = substitute_pred(phi, X, BooleanConcept((sig.predicates[0],), 0b10))
    return phi


TAUTOLOGIES = (
    lambda p, q, r: Implies(p, p),
    lambda p, q, r: Implies(And(p, q), p),
    lambda p, q, r: Implies(p, Implies(q, p)),
    lambda p, q, r: Implies(Implies(p, q), Implies(Implies(q, r), Implies(p, r))),
    lambda p, q, r: Not(And(p, Not(p))),
    lambda p, q, r: Implies(Not(Not(p)), p),
    lambda p, q, r: Implies(Implies(p, Implies(q, r)), Implies(And(p, q), r)),
    lambda p, q, r: Iff(And(p, q), And(q, p)),
)


def _gen(rng: random.Random, sig: Signature, name: str, variant: str | None = None) -> Formula:
    def f(ov=(), pv=(), depth=2, pq=1):
        return random_formula(rng, sig, None, depth, pq, ov, pv)

    i = rng.randint(1, sig.agents)
    c = Name(rng.choice(sig.objects))
    if name == "Prop":
        return rng.choice(TAUTOLOGIES)(f(), f(), f())
    if name == "AGP":
        body = f(ov=("x",))
        s = symbols_of(body)
        atoms = [Aware(i, Atom(Pred(p), ObjVar("x"))) for p in sorted(s.predicates)]
        atoms += [Aware(i, Atom(Concept(k), ObjVar("x"))) for k in sorted(s.concepts)]
        return Iff(Aware(i, body), conj(atoms)) if atoms else Aware(i, body)
    if name == "KA":
        a = Aware(i, f())
        return Implies(a, Knows(i, a))
    if name == "K":
        p, q = f(), f()
        return Implies(And(Knows(i, p), Knows(i, Implies(p, q))), Knows(i, q))
    if name == "T":
        p = f()
        return Implies(Knows(i, p), p)
    if name == "4":
        p = f()
        return Implies(Knows(i, p), Knows(i, Knows(i, p)))
    if name == "5":
        p = f()
        return Implies(And(Not(Knows(i, p)), Aware(i, p)), Knows(i, Not(Knows(i, p))))
    if name == "A0":
        p = f()
        return Implies(Knows(i, p), Aware(i, p))
    if name == "Con":
        C = Concept(rng.choice(sig.concepts))
        x, X = ObjVar("x"), PredVar("X")
        return Not(ForAllPred("X", Not(ForAllObj("x", Iff(Atom(C, x), Atom(X, x))))))
    if name == "1_x":
        p = f(ov=("x",))
        return Implies(ForAllObj("x", p), substitute_obj(p, "x", c))
    if name == "1_X":
        p = f(pv=("X",), pq=0)
        if variant == "concept":
            psi = Concept(rng.choice(sig.concepts))
        else:
            psi = random_bc_formula(rng, sig.predicates, ObjVar("#"), 2)
        return Implies(ForAllPred("X", p), substitute_pred(p, "X", psi))
    if name == "K_x":
        p, q = f(ov=("x",)), f(ov=("x",))
        return Implies(
            ForAllObj("x", Implies(p, q)), Implies(ForAllObj("x", p), ForAllObj("x", q))
        )
    if name == "K_X":
        p, q = f(pv=("X",), pq=0), f(pv=("X",), pq=0)
        return Implies(
            ForAllPred("X", Implies(p, q)), Implies(ForAllPred("X", p), ForAllPred("X", q))
        )
    if name == "N_x":
        p = f()
        return Implies(p, ForAllObj("x", p))
    if name == "N_X":
        p = f(pq=0)
        return Implies(p, ForAllPred("X", p))
    if name == "Barcan_x":
        p = f(ov=("x",))
        return Implies(ForAllObj("x", Knows(i, p)), Knows(i, ForAllObj("x", p)))
    if name == "Barcan_X":
        p = f(pv=("X",), pq=0)
        ax = Aware(i, Atom(PredVar("X"), c))
        return Implies(
            And(Aware(i, ForAllPred("X", p)), ForAllPred("X", Implies(ax, Knows(i, p)))),
            Knows(i, Implies(ForAllPred("X", ax), ForAllPred("X", p))),
        )
    if name == "FA_X":
        a = ForAllPred("X", Not(Aware(i, Atom(PredVar("X"), c))))
        return Implies(a, Knows(i, a))
    if name == "Fin_x":
        return fin_instance(f(ov=("x",)), "x", sig)
    if name == "corrupt:AK":
        p = f()
        return Implies(Aware(i, p), Knows(i, p))
    raise ValueError(f"no generator for {name!r}")


def random_instance(rng: random.Random, sig: Signature, name: str, variant: str | None = None) -> Formula:
    """A random instance of a schema (open formulas allowed)."""
    return _gen(rng, sig, name, variant)


def fuzz_axiom_soundness(
    name: str,
    trials: int = 200,
    seed: int = 0,
    variant: str | None = None,
    models: Sequence[Model] | None = None,
    budget: Budget = Budget(),
) -> FuzzReport:
    """Check random closed instances of a schema for validity in random models.

    Each trial draws a fresh instance and a fresh model (or cycles through
    ``models``); any failing state is recorded as a countermodel.
    """
    if trials < 1:
        raise ValueError("trials must be positive")
    rng = random.Random(seed)
    report = FuzzReport(name, trials)
    for t in range(trials):
        if models:
            m = models[t % len(models)]
        else:
            dims = Dims(states=rng.randint(2, 3), predicates=rng.randint(1, 3), objects=rng.randint(1, 2), concepts=1)
            m = random_model(rng.randrange(1 << 30), dims)
        phi = close(_gen(rng, m.sig, name, variant), m.sig)
        v = validity(EvalContext(m, budget), phi)
        if v.vacuous:
            report.vacuous += 1
        if not v.valid:
            report.countermodels.append({"trial": t, "formula": render(phi), "states": list(v.failing), "model": m})
    return report
