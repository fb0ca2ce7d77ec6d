import json

import pytest

from awarekit import fixtures
from awarekit.cli import main


def fx(name):
    return str(fixtures.path(name))


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    report = json.loads(out)
    assert report["exit"] == code
    return code, report


class TestCheck:
    def test_true(self, capsys):
        code, rep = run_json(capsys, "check", fx("ex1.json"), "--state", "w1", "--formula", "QC(d_cmp)")
        assert code == 0 and rep["value"] is True
        assert rep["states"][0]["in_language"] and rep["states"][0]["aware"] == {"1": True, "2": True}

    def test_false(self, capsys):
        code, rep = run_json(capsys, "check", fx("ex2.json"), "--state", "w1", "--formula", "A 1 Q(d_cmp)")
        assert code == 1 and rep["value"] is False

    def test_malformed(self, capsys):
        code, out, err = run(capsys, "check", fx("ex1.json"), "--state", "w1", "--formula", "P(d_cmp) &")
        assert code == 2 and out == ""
        assert "position 10" in err and err.rstrip().endswith("^")

    def test_formula_file(self, capsys, tmp_path):
        p = tmp_path / "f.txt"
        p.write_text("forall x. (QC(x) -> P(x))\n")
        code, rep = run_json(capsys, "check", fx("ex1.json"), "--formula-file", str(p))
        assert [s["state"] for s in rep["states"]] == ["w1", "w2", "w3"]
        assert code in (0, 1) and "valid" in rep

    def test_unknown_state(self, capsys):
        code, rep = run_json(capsys, "check", fx("ex1.json"), "--state", "w9", "--formula", "P(d_cmp)")
        assert code == 2 and rep["error"] == "UnknownState"

    def test_missing_file(self, capsys, tmp_path):
        code, rep = run_json(capsys, "check", str(tmp_path / "nope.json"), "--formula", "P(d1)")
        assert code == 2 and rep["error"] == "InputError"


class TestAudit:
    def test_ex2(self, capsys):
        code, rep = run_json(capsys, "audit", fx("ex2.json"))
        assert code == 1
        assert rep["A1"]["ok"] and rep["A2"]["ok"] and not rep["A3"]["ok"]
        assert rep["A3"]["witness"]["state"] == "w1" and rep["A3"]["witness"]["other_state"] == "w2"

    def test_ex1(self, capsys):
        code, rep = run_json(capsys, "audit", fx("ex1.json"))
        assert code == 0 and all(rep[a]["ok"] for a in ("A1", "A2", "A3"))

    def test_no_economy(self, capsys, tmp_path):
        data = fixtures.load_json("ex1.json")
        del data["utilities"], data["endowments"]
        p = tmp_path / "bare.json"
        p.write_text(json.dumps(data))
        code, rep = run_json(capsys, "audit", str(p))
        assert code == 2 and rep["error"] == "NoEconomy"


class TestContract:
    def test_synthesize_ex2(self, capsys):
        code, rep = run_json(capsys, "contract", "synthesize", fx("ex2.json"), "--at", "w1")
        assert code == 0 and rep["verify"]["ok"] and rep["scope_check"]["ok"]
        assert rep["outcomes"] == {
            "w1": ["d_cmp", "d_$"],
            "w2": ["d_$", "d_cmp"],
            "w3": ["d_$", "d_cmp"],
        }

    def test_synthesize_ex4(self, capsys):
        code, rep = run_json(capsys, "contract", "synthesize", fx("ex4.json"), "--at", "w2")
        assert code == 2 and rep["error"] == "AwarenessMismatch"
        assert rep["detail"]["only_1"] == ["P"] and rep["detail"]["only_2"] == ["Q"]

    def test_verify_ex1(self, capsys):
        code, rep = run_json(
            capsys, "contract", "verify", fx("ex1.json"), "--contract", fx("ex1_q_contract.json"), "--at", "w1"
        )
        assert code == 0 and rep["verify"]["ok"]

    def test_literal_acceptability_switch(self, capsys):
        code, rep = run_json(
            capsys,
            "contract",
            "verify",
            fx("ex1.json"),
            "--contract",
            fx("ex1_q_contract.json"),
            "--at",
            "w1",
            "--acceptability-at-omega",
        )
        assert code == 1 and rep["verify"]["acceptable"]["1"]["failing_state"] == "w2"

    def test_out_file_round_trips(self, capsys, tmp_path):
        out = tmp_path / "k.json"
        code, _ = run_json(capsys, "contract", "synthesize", fx("ex2.json"), "--at", "w1", "--out", str(out))
        assert code == 0 and out.exists()
        code, rep = run_json(capsys, "contract", "verify", fx("ex2.json"), "--contract", str(out), "--at", "w1")
        assert code == 0 and rep["verify"]["ok"]

    def test_bc_needs_a3(self, capsys):
        code, rep = run_json(capsys, "contract", "synthesize", fx("ex2.json"), "--at", "w1", "--mode", "bc")
        assert code == 2 and rep["error"] == "AssumptionViolated"


class TestProve:
    def test_golden(self, capsys):
        code, rep = run_json(capsys, "prove", fx("proofs/ka_contraposition.json"), "--sig", fx("proof_sig.json"))
        assert code == 0 and rep["ok"]

    def test_mutation(self, capsys):
        code, rep = run_json(capsys, "prove", fx("mutations/ka_contraposition.json"), "--sig", fx("proof_sig.json"))
        assert code == 1 and rep["failure"]["line"] == 1

    @pytest.mark.parametrize(
        "extra",
        [["--sig", fx("proof_sig_infinite.json")], ["--sig", fx("proof_sig.json"), "--infinite-objects"]],
    )
    def test_fin_with_infinite_objects(self, capsys, extra):
        code, rep = run_json(capsys, "prove", fx("proofs/con_fin.json"), *extra)
        assert code == 1 and rep["failure"]["reason"] == "FinRequiresFiniteObjects"


class TestOracle:
    def test_distinguish(self, capsys):
        code, rep = run_json(capsys, "oracle", "distinguish", fx("ex2.json"), "--state", "w1", "--other", "w3")
        assert code == 0 and rep["sentence"] == "P(d_cmp)" and rep["true_at"] == "w1"

    def test_search_ex4(self, capsys):
        code, rep = run_json(capsys, "oracle", "search", fx("ex4.json"), "--at", "w2", "--preds", "R")
        assert code == 1 and rep["efficient_and_acceptable"] == []


def test_validate(capsys):
    code, _ = run_json(capsys, "validate", fx("ex1.json"), "--contract", fx("ex1_q_contract.json"))
    assert code == 0


@pytest.mark.parametrize(
    "argv",
    [
        ("audit", "ex2.json"),
        ("contract", "synthesize", "ex2.json", "--at", "w1"),
        ("oracle", "search", "ex1.json", "--at", "w1"),
        ("check", "ex1.json", "--formula", "existsp X. forall x. (QC(x) <-> X(x))"),
    ],
)
def test_json_is_byte_identical(capsys, argv):
    argv = [fx(a) if a.endswith(".json") else a for a in argv]
    first = run(capsys, *argv, "--json")
    second = run(capsys, *argv, "--json")
    assert first == second


def test_timing_is_opt_in(capsys):
    _, rep = run_json(capsys, "audit", fx("ex1.json"))
    assert "elapsed_s" not in rep
    _, rep = run_json(capsys, "audit", fx("ex1.json"), "--timing")
    assert rep["elapsed_s"] >= 0


def test_budget_env(capsys, monkeypatch):
    monkeypatch.setenv("AWAREKIT_BUDGET", "max_cells=1")
    code, rep = run_json(capsys, "oracle", "search", fx("ex2.json"), "--at", "w1")
    assert code == 2 and rep["error"] == "BudgetExceeded"
    monkeypatch.setenv("AWAREKIT_BUDGET", "nonsense")
    code, rep = run_json(capsys, "check", fx("ex1.json"), "--formula", "P(d_cmp)")
    assert code == 2 and rep["error"] == "BadBudget" and "key=value" in rep["message"]


def test_human_and_json_agree(capsys):
    code_h, out, _ = run(capsys, "audit", fx("ex2.json"))
    code_j, rep = run_json(capsys, "audit", fx("ex2.json"))
    assert code_h == code_j == 1
    assert "A3" in out and "w2" in out
