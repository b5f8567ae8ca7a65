"""Command-line frontend: decide, prove, check, modelcheck, corpus.

Exit codes for decide/prove: 0 valid, 1 invalid, 2 resource limit, 3 usage
or parse error.  All reports are machine-readable; JSON outputs carry a
schema-version field.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from . import metatheory, prover, semantics
from .calculus import CalculusVariant
from .formula import ParseError, collapse_backward, desugar, parse, print_ascii
from .metatheory import derivation_from_json, derivation_to_json, derivation_to_latex
from .prover import Budget, Invalid, Valid
from .semantics import KripkeModel

SCHEMA_VERSION = "1"
DEFAULT_BUDGET_NODES = 1_000_000
DEFAULT_BUDGET_MS = 30_000


@dataclass
class Config:
    logic: str = "kt"
    calculus: str = "lns-star"
    output: str = "text"
    budget_nodes: int = DEFAULT_BUDGET_NODES
    budget_ms: int = DEFAULT_BUDGET_MS
    seed: int = 0
    certify: bool = False

    def variant(self) -> CalculusVariant:
        if self.logic == "kb":
            return CalculusVariant.KB
        return CalculusVariant.KT if self.calculus == "lns" else CalculusVariant.KT_STAR

    def budget(self) -> Budget:
        return Budget(self.budget_nodes, self.budget_ms)


class UsageError(Exception):
    pass


def _config_from(args) -> Config:
    ms = args.budget_ms
    if ms is None:
        env = os.environ.get("TENSEPROVE_BUDGET_MS")
        ms = int(env) if env else DEFAULT_BUDGET_MS
    cfg = Config(
        logic=args.logic,
        calculus=args.calculus,
        output=args.output,
        budget_nodes=args.budget_nodes,
        budget_ms=ms,
        seed=getattr(args, "seed", 0),
        certify=getattr(args, "certify", False),
    )
    if cfg.logic == "kb" and args.calculus_given and cfg.calculus == "lns":
        raise UsageError("--logic kb has a single rule set; --calculus lns does not apply")
    return cfg


def _read_text(arg: str) -> str:
    if arg == "-":
        return sys.stdin.read()
    return arg


def _read_file(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _decide(formula_text: str, cfg: Config):
    f = parse(formula_text.strip())
    return prover.prove(f, cfg.variant(), cfg.budget()), f


def _report_decide(outcome, f, cfg: Config) -> int:
    v = cfg.variant()
    if isinstance(outcome, Valid):
        if cfg.certify and not metatheory.check(outcome.derivation, v):
            print("certification failed", file=sys.stderr)
            return 2
        if cfg.output == "json":
            print(json.dumps({
                "schema": SCHEMA_VERSION,
                "formula": print_ascii(f),
                "verdict": "valid",
                "derivation": derivation_to_json(outcome.derivation),
                "stats": outcome.stats.to_json(),
            }, indent=None, sort_keys=True))
        elif cfg.output == "latex":
            print(derivation_to_latex(outcome.derivation))
        elif cfg.output == "dot":
            print("// valid: no countermodel")
        else:
            print(f"valid: {print_ascii(f)}")
            print(f"derivation: {len(outcome.derivation.rules_used())} rule applications, "
                  f"height {outcome.derivation.height}")
        return 0
    if isinstance(outcome, Invalid):
        core = desugar(f)
        if v is CalculusVariant.KB:
            core = collapse_backward(core)
        if cfg.certify and semantics.forces(outcome.model, outcome.root, core,
                                            symmetric=(v is CalculusVariant.KB)):
            print("certification failed", file=sys.stderr)
            return 2
        if cfg.output == "json":
            print(json.dumps({
                "schema": SCHEMA_VERSION,
                "formula": print_ascii(f),
                "verdict": "invalid",
                "model": outcome.model.to_json(outcome.root),
                "stats": outcome.stats.to_json(),
            }, indent=None, sort_keys=True))
        elif cfg.output == "dot":
            print(outcome.model.to_dot(outcome.root))
        elif cfg.output == "latex":
            print("% invalid: countermodel found")
        else:
            print(f"invalid: {print_ascii(f)}")
            print(f"countermodel: {json.dumps(outcome.model.to_json(outcome.root), sort_keys=True)}")
        return 1
    print("resource limit reached", file=sys.stderr)
    return 2


def cmd_decide(args) -> int:
    cfg = _config_from(args)
    outcome, f = _decide(_read_text(args.formula), cfg)
    return _report_decide(outcome, f, cfg)


def cmd_check(args) -> int:
    cfg = _config_from(args)
    data = json.loads(_read_file(args.derivation))
    if isinstance(data, dict) and "derivation" in data:
        data = data["derivation"]
    d = derivation_from_json(data)
    res = metatheory.check(d, cfg.variant())
    if res:
        print("ok")
        return 0
    print(f"invalid derivation at premiss path {list(res.path)}: {res.message}")
    return 1


def cmd_modelcheck(args) -> int:
    cfg = _config_from(args)
    data = json.loads(_read_file(args.model))
    m = KripkeModel.from_json(data)
    world = args.world or data.get("root")
    if world is None:
        raise UsageError("no world: model JSON has no root and --world not given")
    f = desugar(parse(_read_text(args.formula).strip()))
    if cfg.logic == "kb":
        f = collapse_backward(f)
    ok = semantics.forces(m, world, f, symmetric=(cfg.logic == "kb"))
    print("forced" if ok else "not forced")
    return 0 if ok else 1


def cmd_corpus(args) -> int:
    import time

    cfg = _config_from(args)
    lines = [ln for ln in _read_file(args.corpus).splitlines() if ln.strip()]
    failures = 0
    rows = []
    t0 = time.monotonic()
    for ln in lines:
        expected, _, text = ln.partition("\t")
        expected = expected.strip()
        if expected not in ("valid", "invalid", "unknown"):
            raise UsageError(f"bad expectation {expected!r} (want valid/invalid/unknown)")
        f = parse(text.strip())
        outcome = prover.prove(f, cfg.variant(), cfg.budget())
        v = cfg.variant()
        if isinstance(outcome, Valid):
            got = "valid"
            certified = bool(metatheory.check(outcome.derivation, v))
        elif isinstance(outcome, Invalid):
            got = "invalid"
            core = desugar(f)
            if v is CalculusVariant.KB:
                core = collapse_backward(core)
            certified = not semantics.forces(outcome.model, outcome.root, core,
                                             symmetric=(v is CalculusVariant.KB))
        else:
            got = "resource-limit"
            certified = False
        agree = expected == "unknown" or expected == got
        if not agree or not certified:
            failures += 1
        rows.append((expected, got, "yes" if certified else "NO", text.strip()))
    for row in rows:
        print("\t".join(row))
    print(f"# {len(rows)} formulas, {failures} failures")
    # timing goes to stderr so stdout stays byte-identical across runs
    print(f"# elapsed {int((time.monotonic() - t0) * 1000)} ms", file=sys.stderr)
    return 0 if failures == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tenseprove",
                                 description="decision procedures for tense logic and KB")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp, seed=False, certify=False):
        sp.add_argument("--logic", choices=("kt", "kb"), default="kt")
        sp.add_argument("--calculus", choices=("lns", "lns-star"), default="lns-star")
        sp.add_argument("--output", choices=("text", "json", "dot", "latex"), default="text")
        sp.add_argument("--budget-nodes", type=int, default=DEFAULT_BUDGET_NODES)
        sp.add_argument("--budget-ms", type=int, default=None)
        if seed:
            sp.add_argument("--seed", type=int, default=0)
        if certify:
            sp.add_argument("--certify", action="store_true")

    for name in ("decide", "prove"):
        sp = sub.add_parser(name, help="decide a formula (prove requires validity)")
        sp.add_argument("formula", help="formula text, or - for stdin")
        common(sp, certify=True)

    sp = sub.add_parser("check", help="check a derivation JSON file")
    sp.add_argument("derivation", help="path to derivation JSON, or -")
    common(sp)

    sp = sub.add_parser("modelcheck", help="evaluate a formula in a model JSON file")
    sp.add_argument("model", help="path to model JSON, or -")
    sp.add_argument("formula", help="formula text")
    sp.add_argument("--world", default=None)
    common(sp)

    sp = sub.add_parser("corpus", help="run a tab-separated expectation/formula file")
    sp.add_argument("corpus", help="path to corpus file, or -")
    common(sp, seed=True, certify=True)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    args.calculus_given = ("--calculus" in (argv if argv is not None else sys.argv[1:]))
    try:
        if args.command in ("decide", "prove"):
            return cmd_decide(args)
        if args.command == "check":
            return cmd_check(args)
        if args.command == "modelcheck":
            return cmd_modelcheck(args)
        if args.command == "corpus":
            return cmd_corpus(args)
        raise UsageError(f"unknown command {args.command}")
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return 3
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
