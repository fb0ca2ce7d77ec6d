import random

import pytest

from awarekit import fixtures
from awarekit.axiomatics import (
    ProofContext,
    ProofLine,
    check_proof,
    close,
    fuzz_axiom_soundness,
    is_instance,
    is_prop_tautology_instance,
    load_proof,
    load_signature,
    normalize_name,
    parse_proof,
    proof_to_json,
    random_instance,
    recognize_axiom,
)
from awarekit.errors import BudgetExceeded, FinRequiresFiniteObjects
from awarekit.oracle import Dims, random_model
from awarekit.semantics import EvalContext, validity
from awarekit.syntax import parse


@pytest.fixture(scope="module")
def pctx():
    sig, finite = load_signature(fixtures.path("proof_sig.json"))
    return ProofContext(sig, finite)


@pytest.fixture(scope="module")
def pctx_inf():
    sig, finite = load_signature(fixtures.path("proof_sig_infinite.json"))
    assert not finite
    return ProofContext(sig, finite)


def f(ctx, text):
    return parse(text, ctx.sig)


def line(ctx, text, by, refs=(), **kw):
    return ProofLine(f(ctx, text), by, tuple(refs), **kw)


class TestRecognizers:
    @pytest.mark.parametrize(
        "text, names",
        [
            ("(K 1 P(d1)) -> P(d1)", {"T"}),
            ("(A 1 P(d1)) -> K 1 A 1 P(d1)", {"KA"}),
            ("(K 2 Q(d2)) -> K 2 K 2 Q(d2)", {"4"}),
            ("(K 1 P(d1)) -> A 1 P(d1)", {"A0"}),
            ("P(d1) -> K 1 P(d1)", set()),
            ("(A 1 P(d1)) -> K 1 P(d1)", set()),
        ],
    )
    def test_examples(self, pctx, text, names):
        assert recognize_axiom(f(pctx, text), pctx) == names

    def test_con(self, pctx):
        assert is_instance(f(pctx, "existsp X. forall x. (QC(x) <-> X(x))"), "Con", pctx)
        assert not is_instance(f(pctx, "existsp X. forall x. (P(x) <-> X(x))"), "Con", pctx)

    def test_agp(self, pctx):
        assert is_instance(f(pctx, "(A 1 (P(x) & QC(x))) <-> (A 1 P(x)) & A 1 QC(x)"), "AGP", pctx)
        assert not is_instance(f(pctx, "(A 1 (P(x) & QC(x))) <-> A 1 P(x)"), "AGP", pctx)

    def test_one_x(self, pctx):
        assert is_instance(f(pctx, "(forall x. (P(x) & K 1 Q(x))) -> P(d2) & K 1 Q(d2)"), "1_x", pctx)
        assert not is_instance(f(pctx, "(forall x. P(x)) -> Q(d2)"), "1_x", pctx)

    def test_one_X_witnesses(self, pctx):
        assert is_instance(f(pctx, "(forallp X. X(d1)) -> P(d1) & !Q(d1)"), "1_X", pctx)
        assert is_instance(f(pctx, "(forallp X. X(d1)) -> QC(d1)"), "1_X", pctx)
        assert not is_instance(f(pctx, "(forallp X. X(d1)) -> K 1 P(d1)"), "1_X", pctx)
        assert not is_instance(f(pctx, "(forallp X. X(d1) & X(d2)) -> P(d1) & Q(d2)"), "1_X", pctx)

    def test_fin(self, pctx, pctx_inf):
        phi = f(pctx, "(forall x. P(x)) <-> P(d1) & P(d2)")
        assert is_instance(phi, "Fin_x", pctx)
        with pytest.raises(FinRequiresFiniteObjects):
            is_instance(phi, "Fin_x", pctx_inf)
        assert "Fin_x" not in recognize_axiom(phi, pctx_inf)

    def test_names(self):
        assert normalize_name("GenK") == "Gen_K"
        assert normalize_name("1_forall_x") == "1_x"
        assert normalize_name("Barcan_x") == "Barcan_x"


class TestTautologies:
    @pytest.mark.parametrize(
        "text, want",
        [
            ("(K 1 P(d1)) -> K 1 P(d1)", True),
            ("(forall x. P(x)) | !(forall y. P(y))", True),
            ("((A 1 P(d1)) & Q(d2)) -> Q(d2)", True),
            ("(K 1 P(d1)) -> P(d1)", False),
            ("P(d1) | !Q(d1)", False),
        ],
    )
    def test_examples(self, pctx, text, want):
        assert is_prop_tautology_instance(f(pctx, text)) is want

    def test_letter_cap(self, pctx):
        phi = f(pctx, "P(d1) | Q(d1) | R(d1) | P(d2)")
        with pytest.raises(BudgetExceeded):
            is_prop_tautology_instance(phi, max_letters=3)


class TestProofChecker:
    def test_mp(self, pctx):
        proof = [
            line(pctx, "(K 1 P(d1)) -> P(d1)", "T"),
            line(pctx, "K 1 P(d1)", "T"),
        ]
        bad = check_proof(proof, pctx)
        assert (bad.line, bad.reason) == (2, "NotAnInstance")

    def test_forward_reference(self, pctx):
        proof = [
            line(pctx, "P(d1)", "MP", [2, 3]),
        ]
        assert check_proof(proof, pctx).reason == "ForwardReference"

    def test_unknown_rule(self, pctx):
        proof = [line(pctx, "P(d1) -> P(d1)", "Magic")]
        assert check_proof(proof, pctx).reason == "UnknownJustification"

    def test_axiom_with_refs(self, pctx):
        proof = [line(pctx, "P(d1) -> P(d1)", "Prop"), line(pctx, "P(d1) -> P(d1)", "Prop", [1])]
        assert check_proof(proof, pctx).reason == "BadReference"

    def test_gen_k_needs_awareness_conjunct(self, pctx):
        proof = [
            line(pctx, "P(d1) -> P(d1)", "Prop"),
            line(pctx, "K 1 (P(d1) -> P(d1))", "Gen_K", [1]),
        ]
        bad = check_proof(proof, pctx)
        assert (bad.line, bad.reason) == (2, "BadRule")

    def test_parse_errors(self, pctx):
        with pytest.raises(ValueError):
            parse_proof({"formula": "P(d1)"}, pctx)
        with pytest.raises(ValueError):
            parse_proof([{"formula": "P(d1)", "by": "T", "why": 1}], pctx)

    def test_json_round_trip(self, pctx):
        lines = load_proof(fixtures.path("proofs/gen_x.json"), pctx)
        assert parse_proof(proof_to_json(lines), pctx) == lines


@pytest.mark.parametrize("name", fixtures.proof_names())
def test_golden_proof_accepted(name, pctx):
    assert check_proof(load_proof(fixtures.path(f"proofs/{name}.json"), pctx), pctx) is None


@pytest.mark.parametrize("name", fixtures.proof_names())
def test_mutation_rejected_at_line(name, pctx):
    want = fixtures.mutation_manifest()[name]
    bad = check_proof(load_proof(fixtures.path(f"mutations/{name}.json"), pctx), pctx)
    assert bad is not None
    assert (bad.line, bad.reason) == (want["line"], want["reason"])


def test_corpus_size():
    assert len(fixtures.proof_names()) == 10
    assert set(fixtures.mutation_manifest()) == set(fixtures.proof_names())


def test_fin_needs_finite_objects(pctx_inf):
    bad = check_proof(load_proof(fixtures.path("proofs/con_fin.json"), pctx_inf), pctx_inf)
    assert (bad.line, bad.reason) == (2, "FinRequiresFiniteObjects")


class TestFuzz:
    @pytest.mark.parametrize("name", ["KA", "Con", "T", "A0", "1_X"])
    def test_sound(self, name):
        assert fuzz_axiom_soundness(name, trials=40, seed=3).ok

    def test_corrupted_schema_caught(self):
        rep = fuzz_axiom_soundness("corrupt:AK", trials=40, seed=3)
        assert rep.countermodels
        assert {"trial", "formula", "states", "model"} <= set(rep.countermodels[0])

    def test_concept_for_pred_var_is_unsound(self):
        rep = fuzz_axiom_soundness("1_X", trials=200, seed=0, variant="concept")
        assert rep.countermodels

    def test_trials_positive(self):
        with pytest.raises(ValueError):
            fuzz_axiom_soundness("KA", trials=0)


SCHEMAS = ["AGP", "KA", "K", "T", "4", "5", "A0", "1_x", "K_x", "N_x", "Barcan_x", "FA_X", "Fin_x"]


@pytest.mark.parametrize("seed", range(50))
def test_recognized_instances_are_valid(seed):
    # recognizer soundness: anything a recognizer accepts is valid
    rng = random.Random(seed)
    m = random_model(seed, Dims(states=3, predicates=2, objects=2, concepts=1))
    ctx = EvalContext(m)
    pc = ProofContext(m.sig)
    for name in SCHEMAS:
        phi = random_instance(rng, m.sig, name)
        assert name in recognize_axiom(phi, pc), (name, phi)
        assert validity(ctx, close(phi, m.sig)).valid
