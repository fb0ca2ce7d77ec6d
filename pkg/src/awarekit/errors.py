"""Named errors.  Every error the CLI can report derives from AwarekitError."""

from __future__ import annotations


class AwarekitError(Exception):
    """Base class; ``code`` is the stable name used in JSON reports."""

    @property
    def code(self) -> str:
        return type(self).__name__

    def detail(self) -> dict:
        return {}


class ParseError(AwarekitError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.message = message
        self.pos = pos

    def detail(self):
        return {"position": self.pos}


class BudgetExceeded(AwarekitError):
    pass


class NotASentence(AwarekitError):
    pass


# model structure


class ModelError(AwarekitError):
    pass


class SchemaError(ModelError):
    pass


class AwarenessExceedsLanguage(ModelError):
    def __init__(self, agent: int, state: str, extra):
        super().__init__(
            f"A_{agent}({state}) is not contained in the language at {state}: {sorted(extra)}"
        )
        self.agent, self.state, self.extra = agent, state, sorted(extra)

    def detail(self):
        return {"agent": self.agent, "state": self.state, "symbols": self.extra}


class NotAPartition(ModelError):
    def __init__(self, agent: int, reason: str):
        super().__init__(f"partition of agent {agent}: {reason}")
        self.agent = agent

    def detail(self):
        return {"agent": self.agent}


class AwarenessNotConstant(ModelError):
    def __init__(self, agent: int, state: str, other: str):
        super().__init__(f"awareness of agent {agent} differs between {state} and {other}")
        self.agent, self.state, self.other = agent, state, other

    def detail(self):
        return {"agent": self.agent, "state": self.state, "other": self.other}


class ConceptOutOfLanguage(ModelError):
    def __init__(self, state: str, concept: str, extra):
        super().__init__(
            f"definition of {concept} at {state} uses predicates outside the language: {sorted(extra)}"
        )
        self.state, self.concept, self.extra = state, concept, sorted(extra)

    def detail(self):
        return {"state": self.state, "concept": self.concept, "symbols": self.extra}


class NoEconomy(ModelError):
    def __init__(self, message="model has no utilities/endowments"):
        super().__init__(message)


# contracts


class ContractError(AwarekitError):
    pass


class NoTrueClause(ContractError):
    def __init__(self, state: str):
        super().__init__(f"no clause is true at {state}")
        self.state = state

    def detail(self):
        return {"state": self.state}


class MultipleTrueClauses(ContractError):
    def __init__(self, state: str, indices):
        super().__init__(f"clauses {list(indices)} are all true at {state}")
        self.state, self.indices = state, list(indices)

    def detail(self):
        return {"state": self.state, "clauses": self.indices}


class AwarenessMismatch(ContractError):
    def __init__(self, state: str, only1, only2):
        super().__init__(
            f"agents' awareness differs at {state}: only agent 1 {sorted(only1)}, "
            f"only agent 2 {sorted(only2)}"
        )
        self.state, self.only1, self.only2 = state, sorted(only1), sorted(only2)

    def detail(self):
        return {"state": self.state, "only_1": self.only1, "only_2": self.only2}


class AssumptionViolated(ContractError):
    def __init__(self, assumption: str, witness):
        super().__init__(f"utilities violate {assumption}: {witness}")
        self.assumption, self.witness = assumption, witness

    def detail(self):
        return {"assumption": self.assumption, "witness": self.witness.as_dict()}


class PreconditionFails(ContractError):
    def __init__(self, agent: int, state: str, other: str):
        super().__init__(
            f"awareness of agent {agent} is not constant on the scope: {state} vs {other}"
        )
        self.agent, self.state, self.other = agent, state, other

    def detail(self):
        return {"agent": self.agent, "state": self.state, "other": self.other}


class SameCellUtilityMismatch(ContractError):
    """Two states of one cell inside an agent's information set value objects differently."""


# proofs


class FinRequiresFiniteObjects(AwarekitError):
    pass


class ForwardReference(AwarekitError):
    pass
