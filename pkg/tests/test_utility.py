import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from awarekit.errors import NoEconomy
from awarekit.model import from_dict, to_dict
from awarekit.oracle import Dims, random_model, random_utilities
from awarekit.utility import (
    Profile,
    aware_profiles,
    audit,
    check_assumption,
    con_profile,
    prop_profile,
)

DIMS = Dims(states=3, predicates=2, objects=2, concepts=1)


def ok(m, u, which):
    return check_assumption(m, u, which) is None


class TestProfiles:
    def test_ex1(self, ex1):
        assert prop_profile(ex1, "w1", "d_cmp") == {"P", "Q"}
        assert con_profile(ex1, "w1", "d_cmp") == {"QC"}
        assert prop_profile(ex1, "w3", "d_cmp") == set()
        assert con_profile(ex1, "w3", "d_cmp") == {"QC"}
        for w in ex1.states:
            assert prop_profile(ex1, w, "d_$") == {"R"}
            assert con_profile(ex1, w, "d_$") == set()

    @pytest.mark.parametrize(
        "state, want",
        [("w1", Profile({"P"}, {"QC"})), ("w2", Profile({"P"}, set())), ("w3", Profile(set(), {"QC"}))],
    )
    def test_ex2_aware(self, ex2, state, want):
        assert aware_profiles(ex2, 1, state, "d_cmp") == want


class TestAssumptions:
    def test_ex2(self, ex2):
        assert ok(ex2, None, "A1")
        assert ok(ex2, None, "A2")
        w = check_assumption(ex2, None, "A3")
        assert w.as_tuple() == (1, "w1", "d_cmp", "w2", "d_cmp", 2, 0)
        assert "U(w1,d_cmp) = 2" in str(w)

    def test_ex1(self, ex1):
        assert all(v is None for v in audit(ex1).values())

    def test_missing_economy(self, ex1):
        data = to_dict(ex1)
        del data["utilities"], data["endowments"]
        with pytest.raises(NoEconomy):
            audit(from_dict(data))

    def test_unknown_assumption(self, ex1):
        with pytest.raises(ValueError):
            check_assumption(ex1, None, "A4")

    def test_witness_order(self, ex1):
        u = {k: Fraction(0) for k in ex1.require_economy().utilities}
        u[2, "w3", "d_$"] = Fraction(1, 2)
        w = check_assumption(ex1, u, "A1")
        assert w.as_tuple()[:5] == (2, "w1", "d_$", "w3", "d_$")
        assert w.as_dict()["u_other"] == "1/2"


# ------------------------------------------------------------- properties


@given(st.integers(0, 10**6), st.integers(0, 10**6))
def test_constructed_utilities_pass_their_assumption(seed, useed):
    m = random_model(seed, DIMS)
    for which in ("A1", "A1con", "A2", "A3"):
        assert ok(m, random_utilities(m, useed, which), which)


@given(st.integers(0, 10**6), st.integers(0, 10**6))
def test_a3_implies_a2(seed, useed):
    m = random_model(seed, DIMS)
    u = random_utilities(m, useed, "A3")
    assert ok(m, u, "A2")


@given(st.integers(0, 10**6), st.integers(0, 10**6))
def test_a3_implies_a1_with_state_independent_awareness(seed, useed):
    m = random_model(seed, DIMS, full_awareness=True)
    u = random_utilities(m, useed, "A3")
    assert ok(m, u, "A1")


def test_a3_does_not_imply_a1_when_awareness_varies():
    # awareness differs between the two states, so A3 never compares them
    m = random_model(0, DIMS)
    u = random_utilities(m, 1, "A3")
    assert ok(m, u, "A3") and ok(m, u, "A2")
    assert not ok(m, u, "A1")


@given(st.integers(0, 10**6), st.integers(0, 10**6), st.sampled_from(["A1", "A1con", None]))
def test_a1_matches_strengthened_form_with_uniform_concepts(seed, useed, which):
    m = random_model(seed, DIMS, uniform_concepts=True)
    u = random_utilities(m, useed, which)
    assert ok(m, u, "A1") == ok(m, u, "A1con")


def test_a1_differs_from_strengthened_form_when_definitions_vary():
    m = random_model(0, DIMS)
    u = random_utilities(m, 0, "A1con")
    assert ok(m, u, "A1con") and not ok(m, u, "A1")


def test_a2_with_varying_concepts_can_break_a3():
    rejected = 0
    for seed in range(50):
        m = random_model(seed, DIMS)
        if not ok(m, random_utilities(m, seed, "A2"), "A3"):
            rejected += 1
    assert rejected > 0


def _small_full_awareness_models():
    for seed in range(40):
        m = random_model(
            seed, Dims(states=2, predicates=2, objects=2, concepts=1), full_awareness=True, uniform_concepts=True
        )
        yield m


def test_assumptions_collapse_under_full_awareness():
    # every utility function over {0, 1} on the small models
    for m in _small_full_awareness_models():
        keys = [(i, w, d) for i in m.agents for w in m.states for d in m.sig.objects]
        for values in itertools.product((0, 1), repeat=len(keys)):
            u = dict(zip(keys, map(Fraction, values)))
            verdicts = {ok(m, u, a) for a in ("A1", "A1con", "A2", "A3")}
            assert len(verdicts) == 1
