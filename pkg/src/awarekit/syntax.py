"""Formula syntax for the logic of partial awareness.

Formulas are immutable trees built from six primitives: atoms, negation,
conjunction, object quantification, predicate quantification, and the
awareness/knowledge modalities.  The surface connectives ``|``, ``->``,
``<->``, ``exists`` and ``existsp`` are desugared while parsing:

    a | b          !(!a & !b)
    a -> b         !(a & !b)
    a <-> b        !(a & !b) & !(b & !a)
    exists x. a    !forall x. !a
    existsp X. a   !forallp X. !a

Negation is not classical outside a state's language, so the desugaring is
fixed rather than chosen per call site.

Boolean combinations of predicate symbols (the argument-free concepts) are
keyed canonically by ``(support, table)``; see :class:`BooleanConcept`.
"""

from __future__ import annotations

import itertools
import re
from functools import lru_cache
from dataclasses import dataclass, field
from typing import Callable, Iterable, NamedTuple, Sequence, Union

from awarekit.errors import BudgetExceeded, ParseError

RESERVED = frozenset({"forall", "exists", "forallp", "existsp", "A", "K", "true"})
IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_$']*\Z")

# argument slot of an argument-free Boolean template; not producible by the lexer
BC_ARG = "#"

DEFAULT_BC_CAP = 4


# ----------------------------------------------------------------- signature


@dataclass(frozen=True)
class Signature:
    """Declared standard names, predicates, concepts and the agent count."""

    objects: tuple
    predicates: tuple
    concepts: tuple
    agents: int = 2

    def __post_init__(self):
        for f in ("objects", "predicates", "concepts"):
            object.__setattr__(self, f, tuple(getattr(self, f)))
        names = self.objects + self.predicates + self.concepts
        if len(set(names)) != len(names):
            dup = sorted({n for n in names if names.count(n) > 1})
            raise ValueError(f"names declared twice: {dup}")
        for n in names:
            if not IDENT_RE.match(n) or n in RESERVED:
                raise ValueError(f"invalid symbol name {n!r}")
        if not self.objects:
            raise ValueError("at least one standard name is required")
        if self.agents < 1:
            raise ValueError("at least one agent is required")

    def to_dict(self) -> dict:
        return {
            "agents": self.agents,
            "objects": list(self.objects),
            "predicates": list(self.predicates),
            "concepts": list(self.concepts),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Signature":
        return cls(
            tuple(d["objects"]),
            tuple(d.get("predicates", ())),
            tuple(d.get("concepts", ())),
            int(d.get("agents", 2)),
        )


# --------------------------------------------------------------------- terms


@dataclass(frozen=True)
class Pred:
    name: str


@dataclass(frozen=True)
class Concept:
    name: str


@dataclass(frozen=True)
class PredVar:
    name: str


@dataclass(frozen=True)
class Name:
    """A standard name; it denotes itself in every state."""

    name: str


@dataclass(frozen=True)
class ObjVar:
    name: str


Head = Union[Pred, Concept, PredVar]
Term = Union[Name, ObjVar]


# ------------------------------------------------------------------ formulas


class Formula:
    """Base class of all formula nodes.

    Nodes cache their hash: evaluation memoizes on whole subtrees, and the
    default dataclass hash would rewalk the tree on every lookup.
    """

    __slots__ = ()

    def __str__(self) -> str:
        return render(self)


def _node(cls):
    names = tuple(n for n in cls.__annotations__ if n != "_h")

    def __post_init__(self):
        vals = tuple(getattr(self, n) for n in names)
        object.__setattr__(self, "_h", hash((cls.__name__,) + vals))

    def __hash__(self):
        return self._h

    def __eq__(self, other):
        if self is other:
            return True
        if type(other) is not type(self) or other._h != self._h:
            return False
        return all(getattr(self, n) == getattr(other, n) for n in names)

    cls.__post_init__ = __post_init__
    cls = dataclass(frozen=True, eq=False)(cls)
    cls.__hash__ = __hash__
    cls.__eq__ = __eq__
    return cls


@_node
class Atom(Formula):
    head: Head
    arg: Term
    _h: int = field(init=False, repr=False, compare=False)


@_node
class Top(Formula):
    """Verum; only produced when trivial concepts are enabled."""

    _h: int = field(init=False, repr=False, compare=False)


@_node
class Not(Formula):
    body: Formula
    _h: int = field(init=False, repr=False, compare=False)


@_node
class And(Formula):
    left: Formula
    right: Formula
    _h: int = field(init=False, repr=False, compare=False)


@_node
class ForAllObj(Formula):
    var: str
    body: Formula
    _h: int = field(init=False, repr=False, compare=False)


@_node
class ForAllPred(Formula):
    var: str
    body: Formula
    _h: int = field(init=False, repr=False, compare=False)


@_node
class Aware(Formula):
    agent: int
    body: Formula
    _h: int = field(init=False, repr=False, compare=False)


@_node
class Knows(Formula):
    agent: int
    body: Formula
    _h: int = field(init=False, repr=False, compare=False)


QUANTIFIERS = (ForAllObj, ForAllPred)
MODALITIES = (Aware, Knows)


# derived connectives, in the one fixed desugaring


def Or(a: Formula, b: Formula) -> Formula:
    return Not(And(Not(a), Not(b)))


def Implies(a: Formula, b: Formula) -> Formula:
    return Not(And(a, Not(b)))


def Iff(a: Formula, b: Formula) -> Formula:
    return And(Implies(a, b), Implies(b, a))


def Exists(var: str, body: Formula) -> Formula:
    return Not(ForAllObj(var, Not(body)))


def ExistsPred(var: str, body: Formula) -> Formula:
    return Not(ForAllPred(var, Not(body)))


def conj(parts: Sequence[Formula]) -> Formula:
    """Left-associated conjunction of a nonempty sequence."""
    if not parts:
        raise ValueError("empty conjunction")
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def disj(parts: Sequence[Formula]) -> Formula:
    if not parts:
        raise ValueError("empty disjunction")
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out


def match_implies(phi: Formula):
    """Return ``(a, b)`` if ``phi`` is the desugared ``a -> b``, else None."""
    if isinstance(phi, Not) and isinstance(phi.body, And) and isinstance(phi.body.right, Not):
        return phi.body.left, phi.body.right.body
    return None


def match_iff(phi: Formula):
    if isinstance(phi, And):
        l, r = match_implies(phi.left), match_implies(phi.right)
        if l and r and l[0] == r[1] and l[1] == r[0]:
            return l
    return None


def match_exists_pred(phi: Formula):
    if (
        isinstance(phi, Not)
        and isinstance(phi.body, ForAllPred)
        and isinstance(phi.body.body, Not)
    ):
        return phi.body.var, phi.body.body.body
    return None


def flatten_and(phi: Formula) -> list[Formula]:
    if isinstance(phi, And):
        return flatten_and(phi.left) + flatten_and(phi.right)
    return [phi]


# ------------------------------------------------------------------ symbols


class Symbols(NamedTuple):
    predicates: frozenset
    concepts: frozenset
    objects: frozenset
    free_obj_vars: frozenset
    free_pred_vars: frozenset


def symbols_of(phi: Formula) -> Symbols:
    preds, cons, objs, fo, fp = set(), set(), set(), set(), set()

    def walk(f, bo, bp):
        if isinstance(f, Atom):
            h, a = f.head, f.arg
            if isinstance(h, Pred):
                preds.add(h.name)
            elif isinstance(h, Concept):
                cons.add(h.name)
            elif h.name not in bp:
                fp.add(h.name)
            if isinstance(a, Name):
                objs.add(a.name)
            elif a.name not in bo:
                fo.add(a.name)
        elif isinstance(f, Not):
            walk(f.body, bo, bp)
        elif isinstance(f, And):
            walk(f.left, bo, bp)
            walk(f.right, bo, bp)
        elif isinstance(f, ForAllObj):
            walk(f.body, bo | {f.var}, bp)
        elif isinstance(f, ForAllPred):
            walk(f.body, bo, bp | {f.var})
        elif isinstance(f, (Aware, Knows)):
            walk(f.body, bo, bp)

    walk(phi, frozenset(), frozenset())
    return Symbols(
        frozenset(preds), frozenset(cons), frozenset(objs), frozenset(fo), frozenset(fp)
    )


def is_sentence(phi: Formula) -> bool:
    s = symbols_of(phi)
    return not s.free_obj_vars and not s.free_pred_vars


def all_var_names(phi: Formula) -> set[str]:
    """Every variable name occurring in ``phi``, bound or free."""
    out = set()

    def walk(f):
        if isinstance(f, Atom):
            if isinstance(f.head, PredVar):
                out.add(f.head.name)
            if isinstance(f.arg, ObjVar):
                out.add(f.arg.name)
        elif isinstance(f, (ForAllObj, ForAllPred)):
            out.add(f.var)
            walk(f.body)
        elif isinstance(f, And):
            walk(f.left)
            walk(f.right)
        elif isinstance(f, (Not, Aware, Knows)):
            walk(f.body)

    walk(phi)
    return out


def quantifier_depth(phi: Formula, kind=ForAllPred) -> int:
    if isinstance(phi, kind):
        return 1 + quantifier_depth(phi.body, kind)
    if isinstance(phi, And):
        return max(quantifier_depth(phi.left, kind), quantifier_depth(phi.right, kind))
    if isinstance(phi, (Not, Aware, Knows, ForAllObj, ForAllPred)):
        return quantifier_depth(phi.body, kind)
    return 0


def modal_depth(phi: Formula) -> int:
    if isinstance(phi, (Aware, Knows)):
        return 1 + modal_depth(phi.body)
    if isinstance(phi, And):
        return max(modal_depth(phi.left), modal_depth(phi.right))
    if isinstance(phi, (Not, ForAllObj, ForAllPred)):
        return modal_depth(phi.body)
    return 0


def size(phi: Formula) -> int:
    if isinstance(phi, And):
        return 1 + size(phi.left) + size(phi.right)
    if isinstance(phi, (Not, Aware, Knows, ForAllObj, ForAllPred)):
        return 1 + size(phi.body)
    return 1


# ------------------------------------------------------------- substitution


def _map_body(f: Formula, fn: Callable[[Formula], Formula]) -> Formula:
    if isinstance(f, Not):
        return Not(fn(f.body))
    if isinstance(f, And):
        return And(fn(f.left), fn(f.right))
    if isinstance(f, ForAllObj):
        return ForAllObj(f.var, fn(f.body))
    if isinstance(f, ForAllPred):
        return ForAllPred(f.var, fn(f.body))
    if isinstance(f, Aware):
        return Aware(f.agent, fn(f.body))
    if isinstance(f, Knows):
        return Knows(f.agent, fn(f.body))
    return f


def replace_obj_var(phi: Formula, x: str, term: Term) -> Formula:
    """Replace free occurrences of object variable ``x`` by ``term``.

    A binder that would capture a variable ``term`` is renamed first.
    """
    taken = None

    def go(f):
        nonlocal taken
        if isinstance(f, Atom):
            if isinstance(f.arg, ObjVar) and f.arg.name == x:
                return Atom(f.head, term)
            return f
        if isinstance(f, ForAllObj):
            if f.var == x:
                return f
            if isinstance(term, ObjVar) and f.var == term.name and x in symbols_of(f.body).free_obj_vars:
                if taken is None:
                    taken = all_var_names(phi) | {x, term.name}
                y = fresh_name(f.var, taken)
                taken.add(y)
                return ForAllObj(y, go(replace_obj_var(f.body, f.var, ObjVar(y))))
        return _map_body(f, go)

    return go(phi)


def substitute_obj(phi: Formula, x: str, d: Union[str, Name]) -> Formula:
    """phi[x/d]: replace the free occurrences of ``x`` by the standard name ``d``."""
    if isinstance(d, str):
        d = Name(d)
    return replace_obj_var(phi, x, d)


PredSubst = Union["BooleanConcept", Formula, Concept, Pred]


def _template(psi: PredSubst) -> Callable[[Term], Formula]:
    if isinstance(psi, BooleanConcept):
        return psi.apply
    if isinstance(psi, (Concept, Pred)):
        return lambda t: Atom(psi, t)
    if isinstance(psi, Formula):
        arg = bc_argument(psi)
        if arg is None:
            return lambda t: psi
        return lambda t: _replace_term(psi, arg, t)
    raise TypeError(f"cannot substitute {psi!r} for a predicate variable")


def _replace_term(f: Formula, old: Term, new: Term) -> Formula:
    # templates are binder-free Boolean formulas
    if isinstance(f, Atom):
        return Atom(f.head, new) if f.arg == old else f
    return _map_body(f, lambda g: _replace_term(g, old, new))


def substitute_pred(phi: Formula, var: str, psi: PredSubst) -> Formula:
    """phi[Y/psi]: every free atom ``Y(t)`` becomes ``psi`` applied to ``t``.

    ``psi`` may be a :class:`BooleanConcept`, a Boolean template formula (as
    returned by :func:`parse_bc`, or any Boolean formula over one argument),
    or a concept/predicate symbol.
    """
    make = _template(psi)

    def go(f):
        if isinstance(f, Atom):
            if isinstance(f.head, PredVar) and f.head.name == var:
                return make(f.arg)
            return f
        if isinstance(f, ForAllPred) and f.var == var:
            return f
        return _map_body(f, go)

    return go(phi)


def fresh_name(base: str, taken: Iterable[str]) -> str:
    taken = set(taken)
    i = 1
    while f"{base}{i}" in taken:
        i += 1
    return f"{base}{i}"


def abstract_name(phi: Formula, c: Union[str, Name], x: str) -> Formula:
    """phi[c/x]: replace standard name ``c`` by object variable ``x``.

    Binders of ``x`` whose scope mentions ``c`` are renamed first, so the new
    occurrences are never captured.
    """
    if isinstance(c, str):
        c = Name(c)
    taken = all_var_names(phi) | {x}

    def go(f):
        if isinstance(f, Atom):
            return Atom(f.head, ObjVar(x)) if f.arg == c else f
        if isinstance(f, ForAllObj) and f.var == x:
            if c.name not in symbols_of(f.body).objects:
                return f
            y = fresh_name(x, taken)
            taken.add(y)
            return ForAllObj(y, go(replace_obj_var(f.body, x, ObjVar(y))))
        return _map_body(f, go)

    return go(phi)


def _rename_free_pred_var(phi: Formula, old: str, new: str) -> Formula:
    def go(f):
        if isinstance(f, Atom):
            if isinstance(f.head, PredVar) and f.head.name == old:
                return Atom(PredVar(new), f.arg)
            return f
        if isinstance(f, ForAllPred) and f.var == old:
            return f
        return _map_body(f, go)

    return go(phi)


def abstract_pred(phi: Formula, p: Union[str, Pred], var: str) -> Formula:
    """phi[P/X]: replace predicate symbol ``P`` by predicate variable ``X``."""
    if isinstance(p, str):
        p = Pred(p)
    taken = all_var_names(phi) | {var}

    def go(f):
        if isinstance(f, Atom):
            return Atom(PredVar(var), f.arg) if f.head == p else f
        if isinstance(f, ForAllPred) and f.var == var:
            if p.name not in symbols_of(f.body).predicates:
                return f
            y = fresh_name(var, taken)
            taken.add(y)
            return ForAllPred(y, go(_rename_free_pred_var(f.body, var, y)))
        return _map_body(f, go)

    return go(phi)


def canonical(phi: Formula) -> Formula:
    """Rename bound variables by binder depth; alpha-equivalent formulas
    get identical canonical forms."""

    def go(f, om, pm):
        # om/pm map bound names to canonical ones; their "#" entry is the depth
        if isinstance(f, Atom):
            h, a = f.head, f.arg
            if isinstance(h, PredVar) and h.name in pm:
                h = PredVar(pm[h.name])
            if isinstance(a, ObjVar) and a.name in om:
                a = ObjVar(om[a.name])
            return Atom(h, a)
        if isinstance(f, ForAllObj):
            k = om["#"] + 1
            return ForAllObj(f"%o{k}", go(f.body, {**om, f.var: f"%o{k}", "#": k}, pm))
        if isinstance(f, ForAllPred):
            k = pm["#"] + 1
            return ForAllPred(f"%P{k}", go(f.body, om, {**pm, f.var: f"%P{k}", "#": k}))
        return _map_body(f, lambda g: go(g, om, pm))

    return go(phi, {"#": 0}, {"#": 0})


def alpha_equal(a: Formula, b: Formula) -> bool:
    return canonical(a) == canonical(b)


# ---------------------------------------------------------- Boolean concepts


@dataclass(frozen=True, order=True)
class BooleanConcept:
    """A truth function over a set of predicate symbols.

    ``support`` is sorted; row ``r`` of ``table`` gives the value when the
    j-th support predicate holds exactly for the bits j set in ``r``.
    """

    support: tuple
    table: int

    def __post_init__(self):
        if tuple(sorted(set(self.support))) != tuple(self.support):
            raise ValueError(f"support must be sorted and duplicate-free: {self.support}")
        if not 0 <= self.table < 1 << (1 << len(self.support)):
            raise ValueError("table out of range for support")

    @property
    def rows(self) -> int:
        return 1 << len(self.support)

    def value(self, holds: Callable[[str], bool]) -> bool:
        r = 0
        for j, p in enumerate(self.support):
            if holds(p):
                r |= 1 << j
        return bool(self.table >> r & 1)

    def apply(self, arg: Term) -> Formula:
        """The representative formula with ``arg`` distributed over the support."""
        return _applied(self.support, self.table, arg)

    def template(self) -> Formula:
        return self.apply(ObjVar(BC_ARG))

    def text(self) -> str:
        return render_bc(self.template())


@lru_cache(maxsize=1 << 16)
def _applied(support, table, arg):
    return _render_table(support, table, arg)


def _minterm(support, r, arg):
    lits = []
    for j, p in enumerate(support):
        a = Atom(Pred(p), arg)
        lits.append(a if r >> j & 1 else Not(a))
    return conj(lits)


def _render_table(support, table, arg):
    n = 1 << len(support)
    full = (1 << n) - 1
    if not support:
        return Top() if table else Not(Top())
    ones = [r for r in range(n) if table >> r & 1]
    if len(ones) * 2 > n:
        return Not(_render_table(support, full ^ table, arg))
    if not ones:
        # a contradiction that still mentions every support predicate
        first = Atom(Pred(support[0]), arg)
        return conj([And(first, Not(first))] + [Atom(Pred(p), arg) for p in support[1:]])
    return disj([_minterm(support, r, arg) for r in ones])


def bc_argument(psi: Formula):
    """The single argument shared by a Boolean formula's atoms (None if it has
    no atoms).  Raises ValueError if ``psi`` is not a Boolean combination of
    predicate atoms over one argument."""
    args = set()

    def walk(f):
        if isinstance(f, Atom):
            if not isinstance(f.head, Pred):
                raise ValueError(f"not a property atom: {render(f)}")
            args.add(f.arg)
        elif isinstance(f, Not):
            walk(f.body)
        elif isinstance(f, And):
            walk(f.left)
            walk(f.right)
        elif not isinstance(f, Top):
            raise ValueError(f"not a Boolean combination of properties: {render(f)}")

    walk(psi)
    if len(args) > 1:
        raise ValueError("Boolean combination applies properties to different arguments")
    return next(iter(args), None)


def _classical(f: Formula, true_preds) -> bool:
    if isinstance(f, Atom):
        return f.head.name in true_preds
    if isinstance(f, Not):
        return not _classical(f.body, true_preds)
    if isinstance(f, And):
        return _classical(f.left, true_preds) and _classical(f.right, true_preds)
    return True  # Top


def bc_key(psi: Formula) -> BooleanConcept:
    """Key a Boolean combination of properties by (support, table)."""
    bc_argument(psi)
    support = tuple(sorted(symbols_of(psi).predicates))
    table = 0
    for r in range(1 << len(support)):
        true_preds = {p for j, p in enumerate(support) if r >> j & 1}
        if _classical(psi, true_preds):
            table |= 1 << r
    return BooleanConcept(support, table)


def enumerate_bc(
    preds: Iterable[str], cap: int = DEFAULT_BC_CAP, allow_trivial: bool = False
) -> list[BooleanConcept]:
    """One representative per (nonempty support, truth table) over ``preds``.

    Supports come in order of size, then lexicographically; tables ascend.
    With ``allow_trivial`` the two empty-support tables come first.
    """
    preds = sorted(set(preds))
    if len(preds) > cap:
        raise BudgetExceeded(
            f"{len(preds)} predicates exceed the Boolean-concept enumeration cap {cap}"
        )
    out = []
    if allow_trivial:
        out += [BooleanConcept((), 0), BooleanConcept((), 1)]
    for k in range(1, len(preds) + 1):
        for support in itertools.combinations(preds, k):
            out.extend(BooleanConcept(support, t) for t in range(1 << (1 << k)))
    return out


# --------------------------------------------------------------- rendering


def render(phi: Formula, nested: bool = False) -> str:
    """Print in the parser's concrete syntax (round-trips through parse)."""
    if isinstance(phi, Atom):
        return f"{phi.head.name}({phi.arg.name})"
    if isinstance(phi, Top):
        return "true"
    if isinstance(phi, Not):
        return "!" + render(phi.body, nested=True)
    if isinstance(phi, And):
        s = f"{render(phi.left, True)} & {render(phi.right, True)}"
    elif isinstance(phi, ForAllObj):
        s = f"forall {phi.var}. {render(phi.body)}"
    elif isinstance(phi, ForAllPred):
        s = f"forallp {phi.var}. {render(phi.body)}"
    elif isinstance(phi, Aware):
        s = f"A {phi.agent} {render(phi.body)}"
    elif isinstance(phi, Knows):
        s = f"K {phi.agent} {render(phi.body)}"
    else:
        raise TypeError(f"not a formula: {phi!r}")
    return f"({s})" if nested else s


def render_bc(psi: Formula) -> str:
    """Print a Boolean template without arguments, e.g. ``P & !Q``."""
    bc_argument(psi)
    return _render_bc(psi)


def _render_bc(f: Formula, nested: bool = False) -> str:
    if isinstance(f, Atom):
        return f.head.name
    if isinstance(f, Top):
        return "true"
    if isinstance(f, Not):
        return "!" + _render_bc(f.body, True)
    s = f"{_render_bc(f.left, True)} & {_render_bc(f.right, True)}"
    return f"({s})" if nested else s


# ------------------------------------------------------------------ parsing

_TOKEN = re.compile(
    r"\s*(?:(?P<op><->|->|[!&|().,])|(?P<int>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_$']*))"
)


class _Tok(NamedTuple):
    kind: str
    text: str
    pos: int


def _lex(text: str) -> list[_Tok]:
    toks, pos = [], 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        toks.append(_Tok(kind, m.group(kind), m.start(kind)))
        pos = m.end()
    toks.append(_Tok("eof", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text, sig, bc=False):
        self.toks = _lex(text)
        self.i = 0
        self.sig = sig
        self.bc = bc
        self.objects = set(sig.objects)
        self.preds = set(sig.predicates)
        self.concepts = set(sig.concepts)

    @property
    def tok(self):
        return self.toks[self.i]

    def take(self, kind=None, text=None):
        t = self.tok
        if (kind and t.kind != kind) or (text and t.text != text):
            want = text or kind
            got = t.text or "end of input"
            raise ParseError(f"expected {want!r}, found {got!r}", t.pos)
        self.i += 1
        return t

    def at(self, text):
        return self.tok.kind in ("op", "ident") and self.tok.text == text

    def parse(self):
        f = self.iff(frozenset(), frozenset())
        if self.tok.kind != "eof":
            raise ParseError(f"unexpected {self.tok.text!r}", self.tok.pos)
        return f

    def iff(self, bo, bp):
        f = self.imp(bo, bp)
        while self.at("<->"):
            self.take()
            f = Iff(f, self.imp(bo, bp))
        return f

    def imp(self, bo, bp):
        f = self.disj(bo, bp)
        if self.at("->"):
            self.take()
            return Implies(f, self.imp(bo, bp))
        return f

    def disj(self, bo, bp):
        f = self.conj(bo, bp)
        while self.at("|"):
            self.take()
            f = Or(f, self.conj(bo, bp))
        return f

    def conj(self, bo, bp):
        f = self.unary(bo, bp)
        while self.at("&"):
            self.take()
            f = And(f, self.unary(bo, bp))
        return f

    def unary(self, bo, bp):
        t = self.tok
        if self.at("!"):
            self.take()
            return Not(self.unary(bo, bp))
        if self.at("("):
            self.take()
            f = self.iff(bo, bp)
            self.take("op", ")")
            return f
        if t.kind == "ident" and t.text == "true":
            self.take()
            return Top()
        if t.kind == "ident" and not self.bc:
            if t.text in ("forall", "exists", "forallp", "existsp"):
                return self.quant(bo, bp)
            if t.text in ("A", "K"):
                self.take()
                n = self.take("int")
                agent = int(n.text)
                if not 1 <= agent <= self.sig.agents:
                    raise ParseError(f"no agent {agent}", n.pos)
                body = self.iff(bo, bp)
                return Aware(agent, body) if t.text == "A" else Knows(agent, body)
        if t.kind == "ident":
            return self.atom(bo, bp)
        raise ParseError(f"unexpected {t.text or 'end of input'!r}", t.pos)

    def quant(self, bo, bp):
        kw = self.take().text
        v = self.take("ident")
        name = v.text
        if name in RESERVED or name in self.objects or name in self.preds or name in self.concepts:
            raise ParseError(f"cannot bind declared or reserved name {name!r}", v.pos)
        obj = kw in ("forall", "exists")
        if obj and not name[0].islower():
            raise ParseError(f"object variable {name!r} must start lowercase", v.pos)
        if not obj and not name[0].isupper():
            raise ParseError(f"predicate variable {name!r} must start uppercase", v.pos)
        self.take("op", ".")
        if obj:
            body = self.iff(bo | {name}, bp)
        else:
            body = self.iff(bo, bp | {name})
        return {
            "forall": ForAllObj,
            "exists": Exists,
            "forallp": ForAllPred,
            "existsp": ExistsPred,
        }[kw](name, body)

    def head(self, t):
        n = t.text
        if n in self.preds:
            return Pred(n)
        if n in self.concepts:
            return Concept(n)
        if n in self.objects:
            raise ParseError(f"standard name {n!r} used as a predicate", t.pos)
        if n in RESERVED:
            raise ParseError(f"reserved word {n!r}", t.pos)
        if n[0].isupper():
            return PredVar(n)
        raise ParseError(f"unresolved predicate {n!r}", t.pos)

    def atom(self, bo, bp):
        t = self.take("ident")
        if self.bc:
            if t.text not in self.preds:
                raise ParseError(f"unresolved predicate {t.text!r}", t.pos)
            return Atom(Pred(t.text), ObjVar(BC_ARG))
        head = self.head(t)
        if not self.at("("):
            raise ParseError(f"{t.text!r} takes exactly one argument", self.tok.pos)
        self.take()
        a = self.take("ident")
        n = a.text
        if n in self.objects:
            arg = Name(n)
        elif n in self.preds or n in self.concepts:
            raise ParseError(f"predicate {n!r} used as an argument", a.pos)
        elif n in RESERVED or not n[0].islower():
            raise ParseError(f"{n!r} is not an object term", a.pos)
        else:
            arg = ObjVar(n)
        if self.at(","):
            raise ParseError(f"{t.text!r} is unary", self.tok.pos)
        self.take("op", ")")
        return Atom(head, arg)


def parse(text: str, sig) -> Formula:
    """Parse ``text`` against a signature, returning the desugared AST."""
    return _Parser(text, sig).parse()


def parse_bc(text: str, sig) -> Formula:
    """Parse an argument-free Boolean combination of properties (``P & !Q``)."""
    return _Parser(text, sig, bc=True).parse()
