"""Logic of partial awareness: model checking, contracts and proofs."""

from awarekit.budget import Budget
from awarekit.contracts import Contract, synthesize, verify
from awarekit.errors import AwarekitError
from awarekit.model import Economy, LanguageSlice, Model, load_model
from awarekit.semantics import EvalContext, sat, validity
from awarekit.syntax import BooleanConcept, Signature, parse, render

__version__ = "0.1.0"

__all__ = [
    "AwarekitError",
    "BooleanConcept",
    "Budget",
    "Contract",
    "Economy",
    "EvalContext",
    "LanguageSlice",
    "Model",
    "Signature",
    "load_model",
    "parse",
    "render",
    "sat",
    "synthesize",
    "validity",
    "verify",
]
