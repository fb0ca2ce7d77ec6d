"""Command-line entry point.

Exit codes:
    0  the verdict is positive (true, ok, valid, found)
    1  the verdict is negative (false, violated, rejected, none found)
    2  the input could not be processed (load, parse, budget, precondition)

``--json`` prints one report object with sorted keys; identical inputs give
byte-identical output unless ``--timing`` is passed.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import replace
from pathlib import Path

from awarekit import axiomatics, contracts, oracle
from awarekit.budget import Budget, from_env
from awarekit.errors import AwarekitError, ParseError
from awarekit.model import LanguageSlice, Model, format_rational, load_model, model_violations
from awarekit.semantics import EvalContext, in_language, validity
from awarekit.syntax import Aware, parse, render
from awarekit.utility import audit

EXIT_OK, EXIT_NEGATIVE, EXIT_ERROR = 0, 1, 2


class _Failure(Exception):
    """Input problems that are not library errors (bad flags, missing files)."""

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


def _budget(args) -> Budget:
    base = Budget()
    if getattr(args, "allow_trivial_concepts", False):
        base = replace(base, allow_trivial=True)
    try:
        return from_env(base)
    except ValueError as e:
        raise _Failure("BadBudget", str(e)) from e


def _ctx(args, check: bool = True) -> EvalContext:
    return EvalContext(load_model(args.model, check=check), _budget(args))


def _state(m: Model, w: str) -> str:
    if w not in m.language:
        raise _Failure("UnknownState", f"no state {w!r}; states are {list(m.states)}")
    return w


def _formula_text(args) -> str:
    if args.formula is not None and args.formula_file is not None:
        raise _Failure("BadArguments", "give --formula or --formula-file, not both")
    if args.formula_file is not None:
        return Path(args.formula_file).read_text(encoding="utf-8").strip()
    if args.formula is None:
        raise _Failure("BadArguments", "one of --formula or --formula-file is required")
    return args.formula


# ---------------------------------------------------------------- commands


def cmd_check(args) -> tuple[int, dict, list]:
    ctx = _ctx(args)
    m = ctx.model
    phi = parse(_formula_text(args), m.sig)
    states = [_state(m, args.state)] if args.state else list(m.states)
    rows, lines = [], []
    for w in states:
        row = {
            "state": w,
            "value": ctx.sat(w, phi),
            "in_language": in_language(phi, m.language[w]),
            "aware": {str(i): ctx.sat(w, Aware(i, phi)) for i in m.agents},
        }
        rows.append(row)
        aware = " ".join(f"A{i}={'yes' if v else 'no'}" for i, v in row["aware"].items())
        lines.append(
            f"{w}: {'true' if row['value'] else 'false'}  "
            f"(in language: {'yes' if row['in_language'] else 'no'}; {aware})"
        )
    report = {"formula": render(phi), "states": rows}
    if args.state:
        report["value"] = rows[0]["value"]
        ok = rows[0]["value"]
    else:
        v = validity(ctx, phi)
        report["valid"] = v.valid
        report["vacuous"] = v.vacuous
        ok = v.valid
        lines.append(f"valid: {'yes' if v.valid else 'no'}{' (vacuously)' if v.vacuous else ''}")
    return (EXIT_OK if ok else EXIT_NEGATIVE), report, lines


def cmd_validate(args) -> tuple[int, dict, list]:
    m = load_model(args.model, check=False)
    problems = [{"error": e.code, "message": str(e), **e.detail()} for e in model_violations(m)]
    report = {"model": {"ok": not problems, "violations": problems}}
    lines = ["model: ok" if not problems else "model: INVALID"]
    lines += [f"  {p['error']}: {p['message']}" for p in problems]
    ok = not problems
    if args.contract is not None:
        if problems:
            raise _Failure("InvalidModel", "cannot check a contract against an invalid model")
        k = contracts.load_contract(args.contract, m.sig)
        cond = contracts.validate_contract(EvalContext(m, _budget(args)), k)
        report["contract"] = {
            "ok": cond.ok,
            "exhaustive": cond.exhaustive,
            "exclusive": cond.exclusive,
            "vacuous": cond.vacuous,
            "exhaustive_failing": list(cond.exhaustive_failing),
            "exclusive_failing": [list(x) for x in cond.exclusive_failing],
        }
        lines.append(f"contract exhaustive: {'yes' if cond.exhaustive else 'no'}")
        lines += [f"  no clause true at {w}" for w in cond.exhaustive_failing]
        lines.append(f"contract exclusive: {'yes' if cond.exclusive else 'no'}")
        lines += [f"  clauses {x[0]} and {x[1]} both true at {x[2]}" for x in cond.exclusive_failing]
        if cond.vacuous:
            lines.append("  (no state's language contains the clauses)")
        ok = ok and cond.ok
    return (EXIT_OK if ok else EXIT_NEGATIVE), report, lines


def cmd_audit(args) -> tuple[int, dict, list]:
    m = load_model(args.model)
    res = audit(m, m.require_economy())
    report, lines = {}, []
    for name, wit in res.items():
        report[name] = {"ok": wit is None, "witness": wit.as_dict() if wit else None}
        lines.append(f"{name}: ok" if wit is None else f"{name}: violated, {wit}")
    ok = all(w is None for w in res.values())
    return (EXIT_OK if ok else EXIT_NEGATIVE), report, lines


def cmd_contract_verify(args) -> tuple[int, dict, list]:
    ctx = _ctx(args)
    m = ctx.model
    econ = m.require_economy()
    k = contracts.load_contract(args.contract, m.sig)
    w = _state(m, args.at)
    rep = contracts.verify(ctx, k, w, econ, args.acceptability_at_omega)
    report = {"contract": k.to_dict(), "verify": rep.as_dict()}
    return (EXIT_OK if rep.ok else EXIT_NEGATIVE), report, _verify_lines(rep)


def _verify_lines(rep) -> list:
    yn = lambda b: "yes" if b else "no"  # noqa: E731
    c = rep.conditions
    lines = [
        f"at {rep.state}:",
        f"  exhaustive: {yn(c.exhaustive)}",
        f"  exclusive: {yn(c.exclusive)}",
        f"  articulable: {yn(rep.articulable)}",
        f"  outcome: {rep.outcome}" if rep.outcome else "  outcome: undefined",
        f"  efficient: {yn(rep.efficient)}"
        + (f" (dominated by {rep.dominating})" if rep.dominating else ""),
    ]
    for i, f in rep.acceptable.items():
        lines.append(f"  acceptable to {i}: {yn(f is None)}" + (f" (fails at {f})" if f else ""))
    lines += [f"  {e.code}: {e}" for e in rep.errors]
    lines.append(f"  ok: {yn(rep.ok)}")
    return lines


def cmd_contract_synthesize(args) -> tuple[int, dict, list]:
    ctx = _ctx(args)
    m = ctx.model
    econ = m.require_economy()
    star = _state(m, args.at)
    syn = contracts.synthesize(ctx, star, args.mode, econ)
    k = syn.contract
    rep = contracts.verify(ctx, k, star, econ, args.acceptability_at_omega)
    report = {
        "contract": k.to_dict(),
        "mode": args.mode,
        "scope": list(syn.scope),
        "cells": [list(c) for c in syn.partition.cells],
        "outcomes": {w: list(p) for w, p in sorted(syn.outcomes().items(), key=lambda t: m.index(t[0]))},
        "verify": rep.as_dict(),
    }
    lines = [f"contract at {star} ({args.mode} mode):"]
    lines += [f"  {render(c)}  =>  {p}" for c, p in zip(k.clauses, k.alloc)]
    lines += [f"  outcome at {w}: {tuple(p)}" for w, p in report["outcomes"].items()]
    lines += _verify_lines(rep)
    ok = rep.ok
    scope = contracts.scope_of(m, star)
    if contracts.awareness_deviation(m, scope) is None:
        fail = contracts.verify_theorem1b(ctx, star, k, econ, args.acceptability_at_omega)
        report["scope_check"] = {
            "states": scope,
            "ok": fail is None,
            "failure": None if fail is None else {"state": fail.state, "check": fail.check, "detail": str(fail.detail)},
        }
        lines.append(
            f"efficient and acceptable on {scope}: "
            + ("yes" if fail is None else f"no ({fail.check} at {fail.state})")
        )
        ok = ok and fail is None
    else:
        report["scope_check"] = None
    if args.out:
        Path(args.out).write_text(k.dumps() + "\n", encoding="utf-8")
        lines.append(f"wrote {args.out}")
    return (EXIT_OK if ok else EXIT_NEGATIVE), report, lines


def cmd_prove(args) -> tuple[int, dict, list]:
    sig, finite = axiomatics.load_signature(args.sig)
    if args.infinite_objects:
        finite = False
    ctx = axiomatics.ProofContext(sig, objects_finite=finite)
    proof = axiomatics.load_proof(args.proof, ctx)
    fail = axiomatics.check_proof(proof, ctx)
    report = {"lines": len(proof), "ok": fail is None, "failure": fail.as_dict() if fail else None}
    if fail is None:
        lines = [f"ok: {len(proof)} lines checked"]
    else:
        lines = [f"rejected at line {fail.line}: {fail.reason}: {fail.message}"]
    return (EXIT_OK if fail is None else EXIT_NEGATIVE), report, lines


def _slice(args, m: Model, default: LanguageSlice) -> LanguageSlice:
    if args.preds is None and args.concepts is None:
        return default
    split = lambda s: [x for x in (s or "").split(",") if x]  # noqa: E731
    slc = LanguageSlice(split(args.preds), split(args.concepts))
    unknown = (slc.predicates - set(m.sig.predicates)) | (slc.concepts - set(m.sig.concepts))
    if unknown:
        raise _Failure("BadArguments", f"unknown symbols {sorted(unknown)}")
    return slc


def cmd_oracle_distinguish(args) -> tuple[int, dict, list]:
    ctx = _ctx(args)
    m = ctx.model
    w, w2 = _state(m, args.state), _state(m, args.other)
    slc = _slice(args, m, m.language[w] & m.language[w2])
    eb = oracle.EnumerationBudget.from_budget(ctx.budget)
    phi = oracle.distinguish(ctx, w, w2, slc, eb)
    report = {
        "states": [w, w2],
        "slice": slc.to_dict(),
        "budget": {"max_size": eb.max_size, "max_modal_depth": eb.max_modal_depth, "max_quant_nesting": eb.max_quant_nesting},
        "found": phi is not None,
        "sentence": render(phi) if phi is not None else None,
    }
    if phi is None:
        lines = [f"no sentence within budget separates {w} and {w2}"]
    else:
        lines = [f"{render(phi)}  (true at {w if ctx.sat(w, phi) else w2} only)"]
        report["true_at"] = w if ctx.sat(w, phi) else w2
    return (EXIT_OK if phi is not None else EXIT_NEGATIVE), report, lines


def cmd_oracle_search(args) -> tuple[int, dict, list]:
    ctx = _ctx(args)
    m = ctx.model
    econ = m.require_economy()
    star = _state(m, args.at)
    slc = _slice(args, m, m.aware(1, star) & m.aware(2, star))
    res = oracle.exhaustive_contract_search(ctx, star, econ, slc, args.mode, ctx.budget)
    good = [a for a in res.acceptable if a.efficient]
    fmt = lambda a: {  # noqa: E731
        "pairs": [list(p) for p in a.pairs],
        "welfare": [format_rational(x) for x in a.welfare],
        "efficient": a.efficient,
    }
    report = {
        "at": star,
        "slice": slc.to_dict(),
        "cells": [list(c) for c in res.partition.cells],
        "scanned": res.scanned,
        "acceptable": len(res.acceptable),
        "efficient_and_acceptable": [fmt(a) for a in good],
        "frontier": [fmt(a) for a in res.frontier],
    }
    lines = [
        f"cells: {[list(c) for c in res.partition.cells]}",
        f"assignments scanned: {res.scanned}, acceptable: {len(res.acceptable)}, "
        f"also efficient at {star}: {len(good)}",
    ]
    lines += [f"  {[tuple(p) for p in a.pairs]} welfare {[format_rational(x) for x in a.welfare]}" for a in good]
    return (EXIT_OK if good else EXIT_NEGATIVE), report, lines


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="awarekit", description="Model checking and contracts under partial awareness.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print a JSON report")
    common.add_argument("--timing", action="store_true", help="include wall-clock time in the report")
    common.add_argument(
        "--allow-trivial-concepts",
        action="store_true",
        help="let predicate quantifiers range over the constant concepts too",
    )
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", parents=[common], help="evaluate a sentence")
    c.add_argument("model")
    c.add_argument("--state", help="state to evaluate at (default: all, plus validity)")
    c.add_argument("--formula")
    c.add_argument("--formula-file")
    c.set_defaults(func=cmd_check)

    c = sub.add_parser("validate", parents=[common], help="structural checks of a model (and contract)")
    c.add_argument("model")
    c.add_argument("--contract", "--contract-path", dest="contract")
    c.set_defaults(func=cmd_validate)

    c = sub.add_parser("audit", parents=[common], help="audit A1, A2, A3")
    c.add_argument("model")
    c.set_defaults(func=cmd_audit)

    c = sub.add_parser("contract", help="verify or synthesize contracts")
    csub = c.add_subparsers(dest="action", required=True)
    v = csub.add_parser("verify", parents=[common])
    v.add_argument("model")
    v.add_argument("--contract", "--contract-path", dest="contract", required=True)
    v.add_argument("--at", required=True)
    v.add_argument("--acceptability-at-omega", action="store_true")
    v.set_defaults(func=cmd_contract_verify)
    s = csub.add_parser("synthesize", parents=[common])
    s.add_argument("model")
    s.add_argument("--at", required=True)
    s.add_argument("--mode", choices=("full", "bc"), default="full")
    s.add_argument("--out", help="write the contract JSON here")
    s.add_argument("--acceptability-at-omega", action="store_true")
    s.set_defaults(func=cmd_contract_synthesize)

    c = sub.add_parser("prove", parents=[common], help="check a Hilbert-style derivation")
    c.add_argument("proof")
    c.add_argument("--sig", "--sig-path", dest="sig", required=True)
    c.add_argument("--infinite-objects", action="store_true", help="treat the object supply as infinite")
    c.set_defaults(func=cmd_prove)

    c = sub.add_parser("oracle", help="brute-force references")
    osub = c.add_subparsers(dest="action", required=True)
    d = osub.add_parser("distinguish", parents=[common])
    d.add_argument("model")
    d.add_argument("--state", required=True)
    d.add_argument("--other", required=True)
    d.add_argument("--preds", help="comma-separated predicates (default: shared language)")
    d.add_argument("--concepts", help="comma-separated concepts")
    d.set_defaults(func=cmd_oracle_distinguish)
    s = osub.add_parser("search", parents=[common])
    s.add_argument("model")
    s.add_argument("--at", required=True)
    s.add_argument("--mode", choices=("full", "bc"), default="full")
    s.add_argument("--preds", help="comma-separated predicates (default: common awareness)")
    s.add_argument("--concepts", help="comma-separated concepts")
    s.set_defaults(func=cmd_oracle_search)
    return p


def _command_echo(args) -> list:
    out = [args.command] + ([args.action] if getattr(args, "action", None) else [])
    for k, v in sorted(vars(args).items()):
        if k in ("command", "action", "func", "json", "timing") or v in (None, False):
            continue
        out.append(f"{k}={v}")
    return out


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    t0 = time.perf_counter()
    try:
        code, report, lines = args.func(args)
    except AwarekitError as e:
        code, lines = EXIT_ERROR, [f"error {e.code}: {e}"]
        report = {"error": e.code, "message": str(e), "detail": e.detail()}
        if isinstance(e, ParseError) and args.command == "check" and args.formula is not None:
            lines += ["  " + args.formula, "  " + " " * e.pos + "^"]
    except _Failure as e:
        code, lines = EXIT_ERROR, [f"error {e.code}: {e}"]
        report = {"error": e.code, "message": str(e), "detail": {}}
    except (OSError, ValueError) as e:
        name = "InputError" if isinstance(e, OSError) else "InvalidInput"
        code, lines = EXIT_ERROR, [f"error {name}: {e}"]
        report = {"error": name, "message": str(e), "detail": {}}
    report = {"command": _command_echo(args), "exit": code, **report}
    if args.timing:
        report["elapsed_s"] = round(time.perf_counter() - t0, 6)
        lines.append(f"elapsed: {report['elapsed_s']:.3f}s")
    if args.json:
        print(json.dumps(report, sort_keys=True, indent=2, default=str))
    else:
        out = sys.stdout if code != EXIT_ERROR else sys.stderr
        print("\n".join(lines), file=out)
    return code


if __name__ == "__main__":
    sys.exit(main())
