#!/usr/bin/env python3
"""Search-effort profile: node counts, restarts, and sequent lengths as the
formula size bound grows.

    python3 scripts/search_stats.py --sizes 8 12 16 20
"""

import argparse
import statistics
import sys

from tenseprove.calculus import CalculusVariant
from tenseprove.generate import corpus
from tenseprove.prover import ResourceLimit, Valid, prove


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--n", type=int, default=200)
    ap.add_argument("--degree", type=int, default=2)
    ap.add_argument("--sizes", type=int, nargs="+", default=[8, 12, 16, 20])
    args = ap.parse_args()

    print(f"{'size':>5} {'valid%':>7} {'nodes_med':>10} {'nodes_max':>10} "
          f"{'restarts':>9} {'maxlen':>7} {'limits':>7}")
    for size in args.sizes:
        nodes, restarts, lengths, valid, limits = [], 0, [], 0, 0
        for f in corpus(args.seed, args.n, max_size=size, max_degree=args.degree):
            out = prove(f, CalculusVariant.KT_STAR)
            if isinstance(out, ResourceLimit):
                limits += 1
                continue
            nodes.append(out.stats.nodes)
            restarts += out.stats.restarts
            lengths.append(out.stats.max_length)
            valid += isinstance(out, Valid)
        print(f"{size:>5} {100 * valid / args.n:>6.1f}% {statistics.median(nodes):>10.0f} "
              f"{max(nodes):>10} {restarts:>9} {max(lengths):>7} {limits:>7}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
