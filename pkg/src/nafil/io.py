"""Plain-text table documents and property report emission.

Document format: optional ``#`` comment lines, then a line holding the order
n, then n lines of n space-separated entries in 1..n. Several tables in one
file are separated by blank lines.
"""

from __future__ import annotations

import io as _io
import json
from dataclasses import dataclass
from typing import IO, Iterable, Iterator, Union

from .errors import BadDocumentDimensions, ParseError
from .identities import PROPERTY_ORDER, PropertyReport, Verdict
from .table import LoopTable, build_table

Source = Union[str, bytes, IO[str], IO[bytes], Iterable[str]]


@dataclass(frozen=True)
class TableDocument:
    n: int
    rows: tuple[tuple[int, ...], ...]
    name: str | None = None
    comments: tuple[str, ...] = ()

    def table(self) -> LoopTable:
        return build_table(self.n, self.rows)

    @classmethod
    def from_table(cls, t: LoopTable, name: str | None = None, comments=()) -> "TableDocument":
        return cls(t.n, t.rows, name, tuple(comments))

    def render(self) -> str:
        head = []
        if self.name is not None:
            head.append(f"# name: {self.name}")
        head += [f"# {c}" if c else "#" for c in self.comments]
        body = write_rows(self.n, self.rows)
        return "".join(h + "\n" for h in head) + body


def _lines(src: Source) -> Iterator[str]:
    if isinstance(src, bytes):
        src = src.decode("utf-8")
    if isinstance(src, str):
        src = _io.StringIO(src)
    for line in src:
        if isinstance(line, bytes):
            line = line.decode("utf-8")
        yield line.rstrip("\r\n")


def _ints(line: str, lineno: int) -> list[int]:
    out = []
    col = 0
    for tok in line.split():
        col = line.index(tok, col)
        try:
            out.append(int(tok))
        except ValueError:
            raise ParseError(f"expected an integer, got {tok!r}", lineno, col + 1) from None
        col += len(tok)
    return out


def _documents(src: Source) -> Iterator[TableDocument]:
    comments: list[str] = []
    name = None
    n = None
    rows: list[list[int]] = []
    start = 0

    def finish(lineno):
        if n is not None and len(rows) < n:
            raise BadDocumentDimensions(
                f"table starting on line {start} has {len(rows)} of {n} rows", lineno
            )

    lineno = 0
    for lineno, line in enumerate(_lines(src), 1):
        stripped = line.strip()
        if n is not None and len(rows) == n:
            if stripped and not stripped.startswith("#"):
                raise BadDocumentDimensions(
                    f"table starting on line {start} has more than {n} rows", lineno
                )
        if not stripped:
            finish(lineno)
            if n is not None:
                yield TableDocument(n, tuple(map(tuple, rows)), name, tuple(comments))
                comments, name, n, rows = [], None, None, []
            continue
        if stripped.startswith("#"):
            if n is not None:
                if len(rows) < n:
                    raise ParseError("comment inside a table", lineno, line.index("#") + 1)
                yield TableDocument(n, tuple(map(tuple, rows)), name, tuple(comments))
                comments, name, n, rows = [], None, None, []
            text = stripped[1:].strip()
            if text.startswith("name:") and name is None:
                name = text[5:].strip()
            else:
                comments.append(text)
            continue
        values = _ints(line, lineno)
        if n is None:
            if len(values) != 1:
                raise ParseError("expected the table order on a line of its own", lineno)
            n = values[0]
            start = lineno
            if n < 1:
                raise BadDocumentDimensions(f"order must be positive, got {n}", lineno)
            continue
        if len(values) != n:
            raise BadDocumentDimensions(
                f"row {len(rows) + 1} has {len(values)} entries, expected {n}", lineno
            )
        rows.append(values)
    if n is not None:
        finish(lineno + 1)
        yield TableDocument(n, tuple(map(tuple, rows)), name, tuple(comments))


def read_documents(src: Source) -> Iterator[TableDocument]:
    """Lazily parse every table document in ``src`` (entries not yet validated)."""
    return _documents(src)


def read_document(src: Source) -> TableDocument:
    docs = _documents(src)
    first = next(docs, None)
    if first is None:
        raise ParseError("no table found", 1)
    if next(docs, None) is not None:
        raise ParseError("expected a single table, found several", 1)
    return first


def read_table(src: Source) -> LoopTable:
    return read_document(src).table()


def read_tables(src: Source) -> Iterator[LoopTable]:
    """Stream validated tables one at a time."""
    for doc in _documents(src):
        yield doc.table()


def write_rows(n: int, rows) -> str:
    return f"{n}\n" + "".join(" ".join(str(v) for v in r) + "\n" for r in rows)


def write_table(t: LoopTable) -> str:
    return write_rows(t.n, t.rows)


def write_tables(tables: Iterable[LoopTable]) -> str:
    return "\n".join(write_table(t) for t in tables)


# ---------------------------------------------------------------------------
# reports


def _verdict_text(v: Verdict) -> str:
    if not v.available:
        return "unavailable"
    if v.holds:
        return "holds"
    c = v.counterexample
    if c is None:
        return "fails"
    part = f"; {c.part} fails" if c.part else ""
    return f"fails (counterexample: {c.describe()}{part})"


def _verdict_record(v: Verdict) -> dict:
    if not v.available:
        return {"holds": None}
    rec: dict = {"holds": v.holds}
    c = v.counterexample
    if c is not None:
        rec["counterexample"] = {
            "assignment": dict(c.assignment),
            "lhs": c.lhs,
            "rhs": c.rhs,
            **({"part": c.part} if c.part else {}),
        }
    return rec


def _yn(b: bool) -> str:
    return "yes" if b else "no"


def report_record(r: PropertyReport) -> dict:
    a = r.axiom_profile
    s = r.structural
    structural = None
    if s is not None:
        structural = {
            "unipotent": s.unipotent,
            "power_associative": s.power_associative,
            "monassociative": s.monassociative,
            "monogenic": s.monogenic,
            "generators": list(s.generators),
            "element_orders": {str(k): v for k, v in s.element_orders.items()},
            "p_orders": {str(k): list(v) for k, v in s.p_orders.items()},
        }
    return {
        "order": r.order,
        "classification": a.classification,
        "axioms": {
            "identity": a.has_identity,
            "invertible": a.invertible,
            "abelian": a.abelian,
            "associative": a.associative,
        },
        "properties": {name: _verdict_record(r.verdicts[name]) for name in PROPERTY_ORDER},
        "structural": structural,
    }


def report_text(r: PropertyReport) -> str:
    a = r.axiom_profile
    lines = [
        f"order: {r.order}",
        f"classification: {a.classification}",
        f"identity: {_yn(a.has_identity)}",
        f"invertible: {_yn(a.invertible)}",
        f"abelian: {_yn(a.abelian)}",
    ]
    if a.associative:
        lines.append("associative: yes")
    else:
        x, y, z = a.assoc_counterexample
        lines.append(f"associative: no (counterexample: x={x}, y={y}, z={z})")
    s = r.structural
    if s is not None:
        lines += [
            f"unipotent: {_yn(s.unipotent)}",
            f"monassociative: {_yn(s.monassociative)}",
            f"power_associative: {_yn(s.power_associative)}",
            f"monogenic: {_yn(s.monogenic)}"
            + (f" (generators: {' '.join(map(str, s.generators))})" if s.monogenic else ""),
            "element_orders: " + " ".join(f"{k}:{v}" for k, v in s.element_orders.items()),
        ]
    lines += [f"{name}: {_verdict_text(r.verdicts[name])}" for name in PROPERTY_ORDER]
    return "\n".join(lines) + "\n"


def emit_report(r: PropertyReport, fmt: str = "text") -> str:
    """Render a report as text lines or as a JSON record with a frozen key set."""
    if fmt == "text":
        return report_text(r)
    if fmt == "machine":
        return json.dumps(report_record(r), indent=2) + "\n"
    raise ValueError(f"unknown report format {fmt!r}")
