#!/usr/bin/env python3
"""Certification experiment over a seeded random corpus.

Runs both engines on every formula, re-checks every certificate, compares
the verdicts against the exhaustive bounded model search, and prints a
summary table.  Nonzero exit if anything disagrees.

    python3 scripts/certify_corpus.py --seed 2026 --n 500
"""

import argparse
import sys
import time

from tenseprove import metatheory, semantics
from tenseprove.calculus import CalculusVariant
from tenseprove.formula import print_ascii
from tenseprove.generate import corpus
from tenseprove.prover import Invalid, Valid, prove


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=2026)
    ap.add_argument("--n", type=int, default=500)
    ap.add_argument("--max-size", type=int, default=12)
    ap.add_argument("--max-degree", type=int, default=2)
    ap.add_argument("--oracle-worlds", type=int, default=3)
    args = ap.parse_args()

    formulas = corpus(args.seed, args.n, max_size=args.max_size, max_degree=args.max_degree)
    counts = {"valid": 0, "invalid": 0}
    failures = []
    t0 = time.monotonic()
    for f in formulas:
        star = prove(f, CalculusVariant.KT_STAR)
        full = prove(f, CalculusVariant.KT)
        if isinstance(star, Valid) != isinstance(full, Valid):
            failures.append(("variant disagreement", f))
            continue
        if isinstance(star, Valid):
            counts["valid"] += 1
            if not metatheory.check(star.derivation, CalculusVariant.KT_STAR):
                failures.append(("derivation rejected", f))
            if not metatheory.check(metatheory.to_ktstar(full.derivation),
                                    CalculusVariant.KT_STAR):
                failures.append(("transfer rejected", f))
            if semantics.bounded_countermodel_search(f, args.oracle_worlds) is not None:
                failures.append(("oracle found a countermodel", f))
        elif isinstance(star, Invalid):
            counts["invalid"] += 1
            if semantics.forces(star.model, star.root, f):
                failures.append(("model not falsifying", f))
        else:
            failures.append(("budget exhausted", f))
    dt = time.monotonic() - t0

    print(f"corpus seed={args.seed} n={args.n} "
          f"size<={args.max_size} degree<={args.max_degree}")
    print(f"valid   {counts['valid']:5d}")
    print(f"invalid {counts['invalid']:5d}")
    print(f"elapsed {dt:7.1f}s")
    for what, f in failures:
        print(f"FAILURE: {what}: {print_ascii(f)}")
    print(f"failures {len(failures)}")
    return 0 if not failures else 1


if __name__ == "__main__":
    sys.exit(main())
