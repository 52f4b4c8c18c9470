"""Isomorphism invariants, canonical forms and classification.

Loop isomorphisms fix the identity, so only the (n-1)! relabelings of
2..n are in play. The canonical form is the row-major lexicographic minimum
over those relabelings.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from . import _kernels as K
from .errors import MixedOrders, NotInvertible, NotNormal
from .table import (
    LEFT,
    RIGHT,
    LoopTable,
    associating_triples,
    p_order,
    two_sided_inverse,
)


def _require(t: LoopTable) -> None:
    if not t.normal:
        raise NotNormal("isomorphism machinery needs tables in normal form")
    if two_sided_inverse(t) is None:
        raise NotInvertible("isomorphism machinery needs invertible loops")


@dataclass(frozen=True)
class Fingerprint:
    order: int
    diagonal: tuple[int, ...]
    p_orders: tuple[tuple[int, int], ...]
    associating_triples: int
    abelian: bool


def fingerprint(t: LoopTable) -> Fingerprint:
    """Cheap isomorphism invariants; equal fingerprints do not imply isomorphism.

    ``diagonal`` starts with the number of self-inverse elements followed by
    the sorted multiplicities of the values on the diagonal, since the raw
    diagonal labels change under relabeling.
    """
    _require(t)
    m = t.zero_based
    diag = np.diag(m)
    mult = sorted(Counter(diag.tolist()).values(), reverse=True)
    pairs = sorted(
        (p_order(t, x, LEFT) or 0, p_order(t, x, RIGHT) or 0) for x in t.elements()
    )
    return Fingerprint(
        order=t.n,
        diagonal=(int((diag == 0).sum()), *mult),
        p_orders=tuple(pairs),
        associating_triples=int(associating_triples(m).sum()),
        abelian=bool((m == m.T).all()),
    )


def canonical_labeling(t: LoopTable) -> tuple[LoopTable, dict[int, int]]:
    """Canonical form plus the relabeling (old -> new, 1-based) producing it."""
    _require(t)
    n = t.n
    best = np.empty((n, n), np.int64)
    lab = np.empty(n, np.int64)
    K.canonical(t.zero_based.astype(np.int64), n, best, lab)
    return LoopTable(best), {k + 1: int(v) + 1 for k, v in enumerate(lab)}


def canonical_form(t: LoopTable) -> LoopTable:
    return canonical_labeling(t)[0]


def canonical_batch(batch: np.ndarray) -> np.ndarray:
    """Canonical forms of a (k, n, n) stack of 0-based normal invertible tables."""
    k, n, _ = batch.shape
    out = np.empty((k, n, n), np.int8)
    K.canonical_batch(batch, n, out)
    return out


def canonical_key(t: LoopTable) -> str:
    """Canonical form in the plain-text table format, usable as a dict key."""
    from .io import write_table

    return write_table(canonical_form(t))


def _cycle_type(perm: np.ndarray) -> tuple[int, ...]:
    n = len(perm)
    seen = np.zeros(n, bool)
    cycles = []
    for s in range(n):
        length = 0
        y = s
        while not seen[y]:
            seen[y] = True
            y = perm[y]
            length += 1
        if length:
            cycles.append(length)
    return tuple(sorted(cycles))


def _element_invariants(t: LoopTable) -> list[tuple]:
    # per element: p-orders and the cycle types of its left and right translations
    m = t.zero_based
    return [
        (
            p_order(t, x + 1, LEFT) or 0,
            p_order(t, x + 1, RIGHT) or 0,
            _cycle_type(m[x, :]),
            _cycle_type(m[:, x]),
        )
        for x in range(t.n)
    ]


def are_isomorphic(t1: LoopTable, t2: LoopTable) -> dict[int, int] | None:
    """An isomorphism t1 -> t2 (1-based, fixing 1), or None.

    Independent of canonical_form: a backtracking search that assigns images
    of 2, 3, ... and closes the partial map under products, so a few choices
    usually force the rest.
    """
    _require(t1)
    _require(t2)
    if t1.n != t2.n or fingerprint(t1) != fingerprint(t2):
        return None
    n = t1.n
    a = t1.zero_based
    b = t2.zero_based
    inv1 = _element_invariants(t1)
    inv2 = _element_invariants(t2)
    cand = [[y for y in range(n) if inv2[y] == inv1[x]] for x in range(n)]

    def close(sigma: list[int], used: list[bool], fresh: list[int]) -> bool:
        assigned = [x for x in range(n) if sigma[x] >= 0]
        queue = list(fresh)
        while queue:
            x = queue.pop()
            for y in list(assigned) + [x]:
                for p, q in ((x, y), (y, x)):
                    c = a[p, q]
                    d = b[sigma[p], sigma[q]]
                    if sigma[c] >= 0:
                        if sigma[c] != d:
                            return False
                    else:
                        if used[d] or inv2[d] != inv1[c]:
                            return False
                        sigma[c] = d
                        used[d] = True
                        queue.append(c)
            if x not in assigned:
                assigned.append(x)
        return True

    def extend(sigma: list[int], used: list[bool]) -> list[int] | None:
        try:
            x = sigma.index(-1)
        except ValueError:
            return sigma
        for y in cand[x]:
            if used[y]:
                continue
            s2 = list(sigma)
            u2 = list(used)
            s2[x] = y
            u2[y] = True
            if close(s2, u2, [x]):
                res = extend(s2, u2)
                if res is not None:
                    return res
        return None

    sigma = [-1] * n
    used = [False] * n
    sigma[0] = 0
    used[0] = True
    res = extend(sigma, used)
    if res is None:
        return None
    perm = np.array(res)
    if not (perm[a] == b[np.ix_(perm, perm)]).all():
        raise AssertionError("isomorphism search returned a non-homomorphism")
    return {x + 1: int(res[x]) + 1 for x in range(n)}


@dataclass
class IsoClass:
    canonical: LoopTable
    members_seen: int = 0
    sample_properties: object | None = None


def classify(tables: Iterable[LoopTable]) -> list[IsoClass]:
    """Group tables by canonical form; classes come back sorted by canonical table."""
    counts: dict[bytes, int] = {}
    order = None
    for t in tables:
        if order is None:
            order = t.n
        elif t.n != order:
            raise MixedOrders(f"got tables of orders {order} and {t.n}")
        key = canonical_form(t).zero_based.tobytes()
        counts[key] = counts.get(key, 0) + 1
    if order is None:
        return []
    return [
        IsoClass(LoopTable(np.frombuffer(k, np.int8).reshape(order, order)), c)
        for k, c in sorted(counts.items())
    ]
