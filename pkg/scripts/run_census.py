"""Census of NAFILs (or constrained loops) over a range of orders.

    python scripts/run_census.py --orders 1-7 --allow-long
    python scripts/run_census.py --orders 6 --constraint FL --threads 4
"""

import argparse
import json
import sys
from dataclasses import asdict, dataclass, field

from nafil.enumerate import census
from nafil.identities import as_identities, resolve


@dataclass
class CensusConfig:
    orders: list[int]
    constraints: list[str] = field(default_factory=list)
    include_associative: bool = False
    allow_long: bool = False
    threads: int = 1


def parse_orders(text: str) -> list[int]:
    if "-" in text:
        lo, hi = map(int, text.split("-"))
        return list(range(lo, hi + 1))
    return [int(x) for x in text.split(",")]


def run(cfg: CensusConfig) -> list[dict]:
    cons = tuple(i for c in cfg.constraints for i in as_identities(resolve(c)))
    rows = []
    for n in cfg.orders:
        c = census(
            n,
            constraints=cons,
            require_nonassociative=not cfg.include_associative,
            allow_long=cfg.allow_long,
            threads=cfg.threads,
            progress=lambda m: print(m, file=sys.stderr, end="\r"),
        )
        rows.append({"order": n, "classes": c.class_count,
                     "reduced_tables": c.reduced_count, "seconds": round(c.seconds, 2)})
        print(json.dumps(rows[-1]), flush=True)
    return rows


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--orders", default="1-6")
    p.add_argument("--constraint", action="append", default=[])
    p.add_argument("--include-associative", action="store_true")
    p.add_argument("--allow-long", action="store_true")
    p.add_argument("--threads", type=int, default=1)
    a = p.parse_args()
    cfg = CensusConfig(parse_orders(a.orders), a.constraint, a.include_associative,
                       a.allow_long, a.threads)
    print(json.dumps({"config": asdict(cfg)}), file=sys.stderr)
    run(cfg)


if __name__ == "__main__":
    main()
