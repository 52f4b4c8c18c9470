"""Backtracking enumeration of reduced loop tables.

The search fills rows 2..n left to right, trying values in ascending order,
with row and column bitmasks. When invertibility is required a 1 placed in
cell (i, j) immediately places the mirror 1 in cell (j, i), so two-sided
inverses are built in rather than filtered afterwards. Identity constraints
are checked as soon as an instance becomes determined; non-associativity is
a leaf filter.
"""

from __future__ import annotations

import logging
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence

import numpy as np

from . import _kernels as K
from .errors import CeilingExceeded, IdentityError, NotFound
from .identities import Identity, Ident, Inv, Mul, Term, Var
from .table import LoopTable, axiom_profile

log = logging.getLogger(__name__)

MAX_ORDER = 32
CENSUS_CEILING = 7
LONG_UNCONSTRAINED = 7  # unconstrained searches at or above this order are "long"
LONG_CONSTRAINED = 8
BATCH = 1 << 15


@dataclass(frozen=True)
class EnumerationSpec:
    order: int
    require_invertible: bool = True
    require_nonassociative: bool = True
    constraints: tuple[Identity, ...] = ()
    mode: str = "count"

    def __post_init__(self):
        if not 1 <= self.order <= MAX_ORDER:
            raise ValueError(f"order must be in 1..{MAX_ORDER}, got {self.order}")
        if self.mode not in ("count", "stream"):
            raise ValueError(f"mode must be 'count' or 'stream', not {self.mode!r}")
        object.__setattr__(self, "constraints", tuple(self.constraints))
        for ident in self.constraints:
            if len(ident.vars) > 3:
                raise IdentityError(f"constraint {ident} uses more than 3 variables")
            if ident.uses_inverse and not self.require_invertible:
                raise IdentityError(
                    f"constraint {ident} uses inverses, which needs require_invertible"
                )

    @property
    def is_long(self) -> bool:
        limit = LONG_CONSTRAINED if self.constraints else LONG_UNCONSTRAINED
        return self.order >= limit


def _postfix(t: Term, names: Sequence[str], out: list[int]) -> list[int]:
    if isinstance(t, Var):
        out.append(names.index(t.name))
    elif isinstance(t, Ident):
        out.append(K.OP_E)
    elif isinstance(t, Inv):
        _postfix(t.child, names, out)
        out.append(K.OP_INV)
    elif isinstance(t, Mul):
        _postfix(t.lhs, names, out)
        _postfix(t.rhs, names, out)
        out.append(K.OP_MUL)
    return out


def compile_constraints(constraints: Sequence[Identity]):
    """Postfix programs for the kernel: (progs, plens, nvars, max_len)."""
    progs_l = []
    for ident in constraints:
        sides = [_postfix(ident.lhs, ident.vars, []), _postfix(ident.rhs, ident.vars, [])]
        progs_l.append(sides)
    width = max([len(p) for sides in progs_l for p in sides], default=1)
    if width > 64:
        raise IdentityError("constraint terms are too long for the search kernel")
    c = len(progs_l)
    progs = np.zeros((c, 2, width), np.int64)
    plens = np.zeros((c, 2), np.int64)
    for k, sides in enumerate(progs_l):
        for s, p in enumerate(sides):
            progs[k, s, : len(p)] = p
            plens[k, s] = len(p)
    nvars = np.array([len(i.vars) for i in constraints], np.int64)
    return progs, plens, nvars, width


class _Search:
    """Kernel state for one subtree: a start grid and the cells still to fill."""

    def __init__(self, spec: EnumerationSpec, grid: np.ndarray, first_row: int, last_row: int):
        n = spec.order
        self.spec = spec
        self.n = n
        self.g = grid.copy()
        self.rowm = np.zeros(n, np.int64)
        self.colm = np.zeros(n, np.int64)
        self.inv = np.full(n, -1, np.int64)
        for i in range(n):
            for j in range(n):
                v = int(self.g[i, j])
                if v >= 0:
                    self.rowm[i] |= 1 << v
                    self.colm[j] |= 1 << v
                    if v == 0:
                        self.inv[i] = j
        cells = [(i, j) for i in range(first_row, last_row) for j in range(1, n)]
        self.ci = np.array([c[0] for c in cells], np.int64)
        self.cj = np.array([c[1] for c in cells], np.int64)
        nc = len(cells)
        self.cur = np.full(nc, -1, np.int64)
        self.forced = np.zeros(nc, np.int64)
        self.passthru = np.zeros(nc, np.int64)
        self.nfills = np.zeros(nc, np.int64)
        self.st = np.zeros(3, np.int64)

        progs, plens, nvars, width = compile_constraints(spec.constraints)
        self.progs, self.plens, self.nvars = progs, plens, nvars
        counts = [n ** int(v) for v in nvars]
        self.inst_c = np.repeat(np.arange(len(counts), dtype=np.int64), counts)
        self.inst_idx = np.concatenate(
            [np.arange(c, dtype=np.int64) for c in counts] or [np.zeros(0, np.int64)]
        )
        ninst = len(self.inst_c)
        self.watch = np.zeros((n * n, max(ninst, 1)), np.int64)
        self.wl = np.zeros(n * n, np.int64)
        depth = 2 * width + 2
        self.saved = np.zeros(max(ninst * depth, 1), np.int64)
        self.moves = np.zeros(max(ninst * depth, 1), np.int64)
        self.frec = np.zeros((2 * nc + 2, 4), np.int64)
        self.ptr = np.zeros(3, np.int64)
        if ninst and not K.init_watches(
            n, self.g, self.inv, self.inst_c, self.inst_idx, progs, plens, nvars,
            self.watch, self.wl,
        ):
            self.st[2] = 1

    def batches(self, cap: int = BATCH, nonassoc: bool | None = None) -> Iterator[np.ndarray]:
        n = self.n
        nonassoc = self.spec.require_nonassociative if nonassoc is None else nonassoc
        out = np.empty((cap, n, n), np.int8)
        while self.st[2] == 0:
            k = K.search(
                n, self.g, self.rowm, self.colm, self.inv, self.ci, self.cj,
                self.cur, self.forced, self.passthru, self.nfills, self.st,
                self.spec.require_invertible, nonassoc,
                self.inst_c, self.inst_idx, self.progs, self.plens, self.nvars,
                self.watch, self.wl, self.saved, self.moves, self.frec, self.ptr, out,
            )
            if k:
                yield out[:k].copy()


def _start_grid(n: int) -> np.ndarray:
    g = np.full((n, n), K.EMPTY, np.int8)
    g[0, :] = np.arange(n)
    g[:, 0] = np.arange(n)
    return g


def iter_batches(spec: EnumerationSpec, cap: int = BATCH) -> Iterator[np.ndarray]:
    """Serial search; yields 0-based int8 arrays of shape (k, n, n) in visit order."""
    yield from _Search(spec, _start_grid(spec.order), 1, spec.order).batches(cap)


def subtree_prefixes(spec: EnumerationSpec) -> list[np.ndarray]:
    """Every admissible filling of row 2, the split point for parallel runs."""
    n = spec.order
    if n < 3:
        return [_start_grid(n)]
    s = _Search(spec, _start_grid(n), 1, 2)
    return [g for batch in s.batches(nonassoc=False) for g in batch]


def _subtree_batches(spec: EnumerationSpec, prefix: np.ndarray, cap: int = BATCH):
    n = spec.order
    if n < 3:
        return iter_batches(spec, cap)
    return _Search(spec, prefix, 2, n).batches(cap)


def run_batches(
    spec: EnumerationSpec,
    consume: Callable[[np.ndarray], None],
    threads: int = 1,
    cap: int = BATCH,
) -> int:
    """Feed every batch of visited tables to ``consume``; returns the total count.

    With ``threads > 1`` the tree is split after row 2 and subtrees run
    concurrently (the kernels release the GIL); ``consume`` is then called
    from worker threads and must be thread-safe.
    """
    if threads <= 1:
        total = 0
        for b in iter_batches(spec, cap):
            total += len(b)
            consume(b)
        return total

    totals = []
    lock = threading.Lock()

    def work(prefix):
        count = 0
        for b in _subtree_batches(spec, prefix, cap):
            count += len(b)
            consume(b)
        with lock:
            totals.append(count)

    prefixes = subtree_prefixes(spec)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        for f in [pool.submit(work, p) for p in prefixes]:
            f.result()
    return sum(totals)


def enumerate_loops(
    spec: EnumerationSpec,
    visit: Callable[[LoopTable], None] | None = None,
    threads: int = 1,
) -> int:
    """Visit every reduced table matching ``spec``; returns how many there were."""

    def consume(batch):
        if visit is not None:
            for m in batch:
                visit(LoopTable(m))

    return run_batches(spec, consume, threads)


def iter_loops(spec: EnumerationSpec) -> Iterator[LoopTable]:
    for batch in iter_batches(spec):
        for m in batch:
            yield LoopTable(m)


def verify_existence(n: int) -> LoopTable:
    """The first NAFIL of order n in search order, re-checked from scratch."""
    spec = EnumerationSpec(order=n)
    for batch in iter_batches(spec, cap=1):
        t = LoopTable(batch[0])
        prof = axiom_profile(t)
        if prof.classification != "NAFIL":
            raise AssertionError("search produced a table that is not a NAFIL")
        return t
    raise NotFound(f"no NAFIL of order {n} exists")


@dataclass
class Census:
    order: int
    reduced_count: int
    classes: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def class_count(self) -> int:
        return len(self.classes)


def census(
    n: int,
    constraints: Sequence[Identity] = (),
    require_invertible: bool = True,
    require_nonassociative: bool = True,
    allow_long: bool = False,
    threads: int = 1,
    ceiling: int = CENSUS_CEILING,
    progress: Callable[[str], None] | None = None,
) -> Census:
    """Enumerate, canonicalize every visited table and count isomorphism classes."""
    from .iso import IsoClass, canonical_batch

    spec = EnumerationSpec(
        order=n,
        require_invertible=require_invertible,
        require_nonassociative=require_nonassociative,
        constraints=tuple(constraints),
    )
    if not constraints and n > ceiling:
        raise CeilingExceeded(f"unconstrained census above order {ceiling} is out of reach")
    if spec.is_long and not allow_long:
        raise CeilingExceeded(f"order-{n} search is long-running; pass --allow-long (allow_long=True) to proceed")

    t0 = time.perf_counter()
    counts: dict[bytes, int] = {}
    lock = threading.Lock()
    seen = [0]

    def consume(batch):
        canon = canonical_batch(batch)
        keys, freq = np.unique(canon.reshape(len(canon), -1), axis=0, return_counts=True)
        with lock:
            for key, c in zip(keys, freq):
                kb = key.tobytes()
                counts[kb] = counts.get(kb, 0) + int(c)
            seen[0] += len(batch)
            if progress is not None:
                progress(
                    f"order {n}: {seen[0]} tables, {len(counts)} classes, "
                    f"{time.perf_counter() - t0:.1f}s"
                )

    total = run_batches(spec, consume, threads)
    classes = [
        IsoClass(LoopTable(np.frombuffer(k, np.int8).reshape(n, n)), c)
        for k, c in sorted(counts.items())
    ]
    log.info("census order %d: %d tables, %d classes", n, total, len(classes))
    return Census(n, total, classes, time.perf_counter() - t0)
