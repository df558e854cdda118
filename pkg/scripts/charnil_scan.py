"""Derivation data for the charnil(n) family over a range of n.

    python scripts/charnil_scan.py --min 4 --max 11

Prints dims of Der and LDer3, nilpotency flags, the constructed order q and
the lowest right order carrying an invertible Leibniz-derivation.
"""

import argparse
import time

from leibniz.algebra import is_nilpotent
from leibniz.corpus import charnil
from leibniz.derivations import all_nilpotent, exists_invertible, ldr


def lowest_invertible_order(L, limit):
    for order in range(2, limit + 1):
        if exists_invertible(ldr(L, order))[0]:
            return order
    return None


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--min", type=int, default=4)
    ap.add_argument("--max", type=int, default=10)
    args = ap.parse_args()
    print(f"{'n':>3} {'s':>3} {'Der':>4} {'LDer3':>6} {'char':>5} {'strong':>7} {'q':>3} {'lowest':>7} {'sec':>6}")
    for n in range(args.min, args.max + 1):
        t0 = time.perf_counter()
        L = charnil(n)
        _, s = is_nilpotent(L)
        der, pre = ldr(L, 2), ldr(L, 3)
        q = s // 2 + 1
        low = lowest_invertible_order(L, q)
        print(f"{n:>3} {s:>3} {der.dim:>4} {pre.dim:>6} {str(all_nilpotent(der)):>5} "
              f"{str(all_nilpotent(pre)):>7} {q:>3} {str(low):>7} {time.perf_counter() - t0:6.2f}")


if __name__ == "__main__":
    main()
