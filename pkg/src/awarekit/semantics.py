"""Model checking.

Evaluation is substitutional: ``forall x`` tries every standard name and
``forallp Y`` every Boolean-concept representative over the state's
predicates.  Negation is guarded by the state language, so at a state
lacking ``P`` both ``P(d)`` and ``!P(d)`` are false.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from awarekit.budget import Budget
from awarekit.errors import BudgetExceeded, NotASentence
from awarekit.model import LanguageSlice, Model
from awarekit.syntax import (
    And,
    Atom,
    Aware,
    Concept,
    ForAllObj,
    ForAllPred,
    Formula,
    Knows,
    Name,
    Not,
    Pred,
    Top,
    enumerate_bc,
    quantifier_depth,
    render,
    substitute_obj,
    substitute_pred,
    symbols_of,
)


@lru_cache(maxsize=1 << 18)
def _symbols(phi: Formula):
    s = symbols_of(phi)
    return s.predicates, s.concepts


def in_language(phi: Formula, slc: LanguageSlice) -> bool:
    """Every predicate and concept symbol of ``phi`` lies in ``slc``."""
    preds, cons = _symbols(phi)
    return preds <= slc.predicates and cons <= slc.concepts


class EvalContext:
    """A model plus a memo table of ``(state, sentence) -> bool``.

    The memo key is the sentence itself; rendering is injective on ASTs, so
    this is equivalent to keying by the printed form, just cheaper.
    """

    def __init__(self, model: Model, budget: Budget | None = None, cache: bool = True):
        self.model = model
        self.budget = budget or Budget()
        self.cache: dict | None = {} if cache else None
        self._reps: dict = {}

    def representatives(self, state: str):
        reps = self._reps.get(state)
        if reps is None:
            preds = self.model.language[state].predicates
            if len(preds) > self.budget.bc_cap:
                raise BudgetExceeded(
                    f"|P_{state}| = {len(preds)} exceeds the predicate-quantifier cap "
                    f"{self.budget.bc_cap}"
                )
            reps = enumerate_bc(preds, self.budget.bc_cap, self.budget.allow_trivial)
            self._reps[state] = reps
        return reps

    def check_sentence(self, phi: Formula) -> None:
        s = symbols_of(phi)
        if s.free_obj_vars or s.free_pred_vars:
            free = sorted(s.free_obj_vars | s.free_pred_vars)
            raise NotASentence(f"free variables {free} in {render(phi)}")
        depth = quantifier_depth(phi, ForAllPred)
        if depth > self.budget.max_pred_nesting:
            raise BudgetExceeded(
                f"predicate-quantifier nesting {depth} exceeds budget "
                f"{self.budget.max_pred_nesting}"
            )

    def sat(self, state: str, phi: Formula) -> bool:
        self.check_sentence(phi)
        return self._sat(state, phi)

    def _sat(self, w: str, f: Formula) -> bool:
        cache = self.cache
        if cache is not None:
            hit = cache.get((w, f))
            if hit is not None:
                return hit
        r = self._eval(w, f)
        if cache is not None:
            cache[w, f] = r
        return r

    def _eval(self, w: str, f: Formula) -> bool:
        m = self.model
        if isinstance(f, Atom):
            h, d = f.head, f.arg
            if not isinstance(d, Name):
                raise NotASentence(f"open atom {render(f)}")
            if isinstance(h, Pred):
                return h.name in m.language[w].predicates and d.name in m.extension(w, h.name)
            if isinstance(h, Concept):
                if h.name not in m.language[w].concepts:
                    return False
                bc = m.concept_defs[w, h.name]
                return bc.value(lambda p: d.name in m.extension(w, p))
            raise NotASentence(f"open atom {render(f)}")
        if isinstance(f, Not):
            return in_language(f.body, m.language[w]) and not self._sat(w, f.body)
        if isinstance(f, And):
            return self._sat(w, f.left) and self._sat(w, f.right)
        if isinstance(f, Top):
            return True
        if isinstance(f, ForAllObj):
            return all(self._sat(w, substitute_obj(f.body, f.var, d)) for d in m.sig.objects)
        if isinstance(f, ForAllPred):
            return all(
                self._sat(w, substitute_pred(f.body, f.var, r)) for r in self.representatives(w)
            )
        if isinstance(f, Aware):
            return in_language(f.body, m.aware(f.agent, w))
        if isinstance(f, Knows):
            if not in_language(f.body, m.aware(f.agent, w)):
                return False
            return all(self._sat(v, f.body) for v in m.sorted_states(m.cell(f.agent, w)))
        raise TypeError(f"not a formula: {f!r}")


def _ctx(m) -> EvalContext:
    return m if isinstance(m, EvalContext) else EvalContext(m)


def sat(m: Model | EvalContext, state: str, phi: Formula) -> bool:
    return _ctx(m).sat(state, phi)


@dataclass(frozen=True)
class Validity:
    valid: bool
    # states whose language contains the sentence
    checked: tuple
    failing: tuple

    @property
    def vacuous(self) -> bool:
        return not self.checked

    def __bool__(self) -> bool:
        return self.valid


def validity(m: Model | EvalContext, phi: Formula) -> Validity:
    """Truth at every state whose language contains ``phi``."""
    ctx = _ctx(m)
    ctx.check_sentence(phi)
    checked = tuple(w for w in ctx.model.states if in_language(phi, ctx.model.language[w]))
    failing = tuple(w for w in checked if not ctx.sat(w, phi))
    return Validity(not failing, checked, failing)


def valid_in_model(m: Model | EvalContext, phi: Formula) -> bool:
    return validity(m, phi).valid
