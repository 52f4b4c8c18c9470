"""Command-line interface.

Exit codes: 0 success, 1 validation or parse error, 2 usage error,
3 refusal because of a ceiling or a missing --allow-long.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from typing import Sequence

from . import catalog, enumerate as en, io, iso
from .errors import CeilingExceeded, LoopError
from .identities import as_identities, check_property, property_report, resolve
from .table import LoopTable, all_subloops, transpose

EXIT_OK, EXIT_INVALID, EXIT_USAGE, EXIT_REFUSED = 0, 1, 2, 3


class _Progress:
    """Throttled progress lines on stderr."""

    def __init__(self, every: float = 2.0):
        self.every = every
        self.last = 0.0

    def __call__(self, msg: str) -> None:
        now = time.monotonic()
        if now - self.last >= self.every:
            self.last = now
            print(msg, file=sys.stderr, flush=True)


def _read_src(path: str):
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _out(text: str) -> None:
    sys.stdout.write(text)


def _constraints(args) -> tuple:
    props = [resolve(c) for c in args.constraint or ()]
    props += [resolve(i) for i in args.identity or ()]
    return tuple(i for p in props for i in as_identities(p))


def _catalog_table(name: str):
    if name.lower().startswith("cayley-"):
        try:
            r = int(name.split("-", 1)[1])
        except ValueError:
            raise LoopError(f"bad Cayley-Dickson level in {name!r}") from None
        return catalog.cayley_basis_loop(r)
    return catalog.builtin(name)


# ---------------------------------------------------------------------------
# subcommands


def cmd_analyze(args) -> int:
    t = io.read_table(_read_src(args.file))
    _out(io.emit_report(property_report(t), args.format))
    return EXIT_OK


def cmd_check(args) -> int:
    t = io.read_table(_read_src(args.file))
    v = check_property(t, resolve(args.identity))
    if args.format == "machine":
        _out(json.dumps(io._verdict_record(v)) + "\n")
    else:
        _out(io._verdict_text(v) + "\n")
    return EXIT_OK


def _spec(args, mode="count") -> en.EnumerationSpec:
    return en.EnumerationSpec(
        order=args.order,
        require_invertible=not args.no_invertible,
        require_nonassociative=not args.include_associative,
        constraints=_constraints(args),
        mode=mode,
    )


def _refuse_long(spec, args) -> None:
    if spec.is_long and not args.allow_long:
        raise CeilingExceeded(
            f"order-{spec.order} search is long-running; pass --allow-long to proceed"
        )


def cmd_enumerate(args) -> int:
    spec = _spec(args, "stream" if args.stream or args.sorted else "count")
    _refuse_long(spec, args)
    progress = _Progress()
    seen = [0]
    if spec.mode == "count":
        def consume(batch):
            seen[0] += len(batch)
            progress(f"order {spec.order}: {seen[0]} tables")

        total = en.run_batches(spec, consume, args.threads)
        if args.format == "machine":
            _out(json.dumps({"order": spec.order, "count": total}) + "\n")
        else:
            _out(f"{total}\n")
        return EXIT_OK

    if args.sorted:
        batches = []
        en.run_batches(spec, batches.append, args.threads)
        tables = sorted(
            (m for b in batches for m in b), key=lambda m: m.tobytes()
        )
        _out(io.write_tables(LoopTable(m) for m in tables))
        return EXIT_OK
    # arrival order; only deterministic with a single thread
    first = [True]
    for batch in en.iter_batches(spec):
        for m in batch:
            if not first[0]:
                _out("\n")
            first[0] = False
            _out(io.write_table(LoopTable(m)))
    return EXIT_OK


def cmd_census(args) -> int:
    constraints = _constraints(args)
    result = en.census(
        args.order,
        constraints=constraints,
        require_invertible=not args.no_invertible,
        require_nonassociative=not args.include_associative,
        allow_long=args.allow_long,
        threads=args.threads,
        progress=_Progress(),
    )
    if args.format == "machine":
        rec = {
            "order": result.order,
            "classes": result.class_count,
            "reduced_tables": result.reduced_count,
            "seconds": round(result.seconds, 3),
        }
        if args.representatives:
            rec["representatives"] = [c.canonical.rows for c in result.classes]
        _out(json.dumps(rec) + "\n")
    else:
        _out(
            f"order {result.order}: {result.class_count} classes "
            f"({result.reduced_count} reduced tables, {result.seconds:.2f}s)\n"
        )
        if args.representatives:
            _out(io.write_tables(c.canonical for c in result.classes))
    return EXIT_OK


def cmd_classify(args) -> int:
    classes = iso.classify(io.read_tables(_read_src(args.file)))
    if args.format == "machine":
        _out(json.dumps({
            "classes": len(classes),
            "members": [c.members_seen for c in classes],
            "representatives": [c.canonical.rows for c in classes],
        }) + "\n")
    else:
        _out(f"{len(classes)} classes\n")
        for k, c in enumerate(classes, 1):
            _out(f"\n# class {k}: {c.members_seen} tables\n")
            _out(io.write_table(c.canonical))
    return EXIT_OK


def cmd_catalog(args) -> int:
    if args.name is None:
        names = list(catalog.NAMES) + [f"cayley-{r}" for r in range(catalog.CAYLEY_CEILING + 1)]
        _out("\n".join(names) + "\n")
        return EXIT_OK
    obj = _catalog_table(args.name)
    if isinstance(obj, catalog.RawMatrix):
        # printed as-is; validation is the reader's job
        _out(io.write_rows(obj.n, obj.rows))
    else:
        _out(io.write_table(obj))
    return EXIT_OK


def _map_tables(args, fn) -> int:
    _out(io.write_tables(fn(t) for t in io.read_tables(_read_src(args.file))))
    return EXIT_OK


def cmd_canon(args) -> int:
    return _map_tables(args, iso.canonical_form)


def cmd_transpose(args) -> int:
    return _map_tables(args, transpose)


def cmd_subloops(args) -> int:
    t = io.read_table(_read_src(args.file))
    subs = all_subloops(t)
    if args.format == "machine":
        _out(json.dumps([list(s) for s in subs]) + "\n")
    else:
        _out("".join(" ".join(map(str, s)) + "\n" for s in subs))
    return EXIT_OK


def cmd_existence(args) -> int:
    t0 = time.perf_counter()
    t = en.verify_existence(args.order)
    dt = time.perf_counter() - t0
    print(f"verified NAFIL of order {args.order} in {dt:.2f}s", file=sys.stderr)
    if args.format == "machine":
        _out(json.dumps({"order": t.n, "classification": "NAFIL", "table": t.rows}) + "\n")
    else:
        _out(io.write_table(t))
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def _global_flags(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--threads", type=int, default=d(1), help="worker threads for searches")
    p.add_argument("--format", choices=("text", "machine"), default=d("text"))


def _search_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--constraint", action="append", metavar="NAME",
                   help="catalog property to impose (repeatable)")
    p.add_argument("--identity", action="append", metavar="EXPR",
                   help='identity to impose, e.g. "x*(x*y) = (x*x)*y" (repeatable)')
    p.add_argument("--allow-long", action="store_true", help="permit long-running searches")
    p.add_argument("--include-associative", action="store_true",
                   help="keep associative tables (groups) too")
    p.add_argument("--no-invertible", action="store_true",
                   help="drop the two-sided inverse requirement")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nafil", description="Finite loop analysis toolkit")
    _global_flags(parser, suppress=False)
    parser.add_argument("-v", "--verbose", action="store_true")
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(func=fn)
        return p

    p = add("analyze", cmd_analyze, "property report for one table")
    p.add_argument("file")
    p = add("check", cmd_check, "check one identity or catalog property")
    p.add_argument("file")
    p.add_argument("--identity", required=True, metavar="EXPR_OR_NAME")
    p = add("enumerate", cmd_enumerate, "count or stream reduced tables")
    _search_flags(p)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--count", action="store_true", help="print the number of tables (default)")
    g.add_argument("--stream", action="store_true", help="write every table")
    p.add_argument("--sorted", action="store_true", help="stream sorted by encoding")
    p = add("census", cmd_census, "isomorphism class counts")
    _search_flags(p)
    p.add_argument("--representatives", action="store_true", help="also print class representatives")
    p = add("classify", cmd_classify, "group the tables in a file into isomorphism classes")
    p.add_argument("file")
    p = add("catalog", cmd_catalog, "print a built-in table (no name: list them)")
    p.add_argument("name", nargs="?")
    for name, fn, h in (
        ("canon", cmd_canon, "canonical form of each table"),
        ("transpose", cmd_transpose, "transpose of each table"),
        ("subloops", cmd_subloops, "all subloops of a table"),
    ):
        add(name, fn, h).add_argument("file")
    p = add("existence", cmd_existence, "find and verify a NAFIL of the given order")
    p.add_argument("--order", type=int, required=True)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    if args.threads < 1:
        parser.error("--threads must be at least 1")
    try:
        return args.func(args)
    except CeilingExceeded as e:
        print(f"refused: {e}", file=sys.stderr)
        return EXIT_REFUSED
    except (LoopError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
