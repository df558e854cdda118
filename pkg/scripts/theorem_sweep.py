"""Run theorem_check on random small algebras and report any violation.

    python scripts/theorem_sweep.py --count 200 --dim 4 --seed 0
"""

import argparse
import collections
import random
import sys

from leibniz.algebra import is_nilpotent
from leibniz.corpus import random_algebra
from leibniz.derivations import theorem_check


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--count", type=int, default=100)
    ap.add_argument("--dim", type=int, default=3)
    ap.add_argument("--max-order", type=int, default=4)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    tally = collections.Counter()
    for i in range(args.count):
        L = random_algebra(rng, args.dim)
        rep = theorem_check(L, None if is_nilpotent(L)[0] else args.max_order)
        tally["nilpotent" if rep.nilpotent else "not nilpotent"] += 1
        if not rep.passed:
            print(f"#{i}: violation: {rep.summary()}")
            tally["violations"] += 1
    print(dict(tally))
    return 1 if tally["violations"] else 0


if __name__ == "__main__":
    sys.exit(main())
