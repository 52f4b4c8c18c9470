"""How many isomorphism classes of NAFILs of each small order satisfy each catalog property."""

import argparse

from nafil.enumerate import census
from nafil.identities import PROPERTY_ORDER, property_report


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--max-order", type=int, default=6)
    a = p.parse_args()
    orders = list(range(5, a.max_order + 1))
    counts = {name: [] for name in PROPERTY_ORDER}
    for n in orders:
        reports = [property_report(c.canonical) for c in census(n, allow_long=True).classes]
        for name in PROPERTY_ORDER:
            counts[name].append(sum(r.verdicts[name].holds for r in reports))
    print("property".ljust(10) + "".join(f"n={n}".rjust(8) for n in orders))
    for name, row in counts.items():
        print(name.ljust(10) + "".join(str(v).rjust(8) for v in row))


if __name__ == "__main__":
    main()
