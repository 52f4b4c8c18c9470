"""Right and left Bol NAFILs of order 8, and the transpose correspondence.

Takes a few minutes per handedness on one core.

    python scripts/bol_order8.py [--threads K] [--out reps.txt]
"""

import argparse
import sys
import time

from nafil.enumerate import census
from nafil.identities import lookup
from nafil.io import write_tables
from nafil.iso import classify
from nafil.table import transpose


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", help="write the right Bol representatives here")
    a = p.parse_args()
    results = {}
    for name in ("RBol", "LBol"):
        t0 = time.perf_counter()
        c = census(8, constraints=(lookup(name),), allow_long=True, threads=a.threads,
                   progress=lambda m: print(m, file=sys.stderr, end="\r"))
        results[name] = c
        print(f"{name}: {c.reduced_count} reduced tables, {c.class_count} classes, "
              f"{time.perf_counter() - t0:.1f}s")
    mirrored = {k.canonical for k in classify(transpose(c.canonical) for c in results["RBol"].classes)}
    left = {c.canonical for c in results["LBol"].classes}
    print("transposed RBol classes == LBol classes:", mirrored == left)
    if a.out:
        with open(a.out, "w") as fh:
            fh.write(write_tables(c.canonical for c in results["RBol"].classes))


if __name__ == "__main__":
    main()
