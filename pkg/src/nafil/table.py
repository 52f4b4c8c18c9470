"""Structure matrices (Cayley tables) of finite loops and single-table algebra.

Elements are labelled 1..n. Internally a table is kept as a read-only 0-based
int8 matrix so that numpy fancy indexing does the products; every public
function takes and returns 1-based labels.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    BadDimensions,
    EmptySequence,
    NoIdentity,
    NotInvertible,
    NotLatin,
    NotNormal,
    OutOfRange,
)

LEFT = "left"
RIGHT = "right"


class LoopTable:
    """An immutable n x n structure matrix over the elements 1..n."""

    __slots__ = ("n", "_m", "normal", "_key")

    def __init__(self, zero_based: np.ndarray):
        m = np.array(zero_based, dtype=np.int8, copy=True)
        m.setflags(write=False)
        self.n = m.shape[0]
        self._m = m
        ar = np.arange(self.n)
        self.normal = bool((m[0] == ar).all() and (m[:, 0] == ar).all())
        self._key = m.tobytes()

    @property
    def zero_based(self) -> np.ndarray:
        """The read-only 0-based matrix (identity label 0 in normal form)."""
        return self._m

    @property
    def rows(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(int(v) + 1 for v in row) for row in self._m)

    def elements(self) -> range:
        return range(1, self.n + 1)

    def __eq__(self, other):
        if not isinstance(other, LoopTable):
            return NotImplemented
        return self.n == other.n and self._key == other._key

    def __hash__(self):
        return hash((self.n, self._key))

    def __repr__(self):
        return f"LoopTable(n={self.n}, rows={self.rows})"


@dataclass(frozen=True)
class InverseMaps:
    left_inv: dict[int, int]
    right_inv: dict[int, int]
    two_sided: dict[int, int] | None


@dataclass(frozen=True)
class AxiomProfile:
    has_identity: bool
    invertible: bool
    abelian: bool
    associative: bool
    assoc_counterexample: tuple[int, int, int] | None
    classification: str


@dataclass(frozen=True)
class StructuralProfile:
    unipotent: bool
    monassociative: bool
    power_associative: bool
    monogenic: bool
    generators: tuple[int, ...]
    p_orders: dict[int, tuple[int | None, int | None]]
    element_orders: dict[int, int]


def _check_latin(m: np.ndarray) -> None:
    n = m.shape[0]
    for axis, mat in (("row", m), ("column", m.T)):
        for i, line in enumerate(mat):
            seen = np.zeros(n, dtype=bool)
            for v in line:
                if seen[v]:
                    raise NotLatin(axis, i + 1, int(v) + 1)
                seen[v] = True


def build_table(n: int, rows: Sequence[Sequence[int]]) -> LoopTable:
    """Validate a 1-based matrix and wrap it as a LoopTable."""
    if n < 1:
        raise BadDimensions(f"order must be positive, got {n}")
    if len(rows) != n or any(len(r) != n for r in rows):
        raise BadDimensions(f"expected a {n}x{n} matrix")
    m = np.array([[int(v) for v in r] for r in rows], dtype=np.int64)
    bad = np.argwhere((m < 1) | (m > n))
    if len(bad):
        i, j = bad[0]
        raise OutOfRange(f"entry ({i + 1},{j + 1}) = {m[i, j]} is outside 1..{n}")
    m -= 1
    _check_latin(m)
    return LoopTable(m)


def from_zero_based(m: np.ndarray, validate: bool = True) -> LoopTable:
    m = np.asarray(m)
    if validate:
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise BadDimensions(f"expected a square matrix, got shape {m.shape}")
        if (m < 0).any() or (m >= m.shape[0]).any():
            raise OutOfRange("entry outside 0..n-1")
        _check_latin(m)
    return LoopTable(m)


def _require_normal(t: LoopTable) -> None:
    if not t.normal:
        raise NotNormal("operation requires a table in normal form (identity = 1)")


def product(t: LoopTable, a: int, b: int) -> int:
    return int(t._m[a - 1, b - 1]) + 1


def divide(t: LoopTable, side: str, a: int, b: int) -> int:
    """side="left" solves a*x = b for x; side="right" solves y*a = b for y."""
    if side == LEFT:
        line = t._m[a - 1, :]
    elif side == RIGHT:
        line = t._m[:, a - 1]
    else:
        raise ValueError(f"side must be 'left' or 'right', not {side!r}")
    return int(np.flatnonzero(line == b - 1)[0]) + 1


def identity_element(t: LoopTable) -> int | None:
    """The two-sided identity (1-based), if one exists."""
    ar = np.arange(t.n)
    for e in range(t.n):
        if (t._m[e] == ar).all() and (t._m[:, e] == ar).all():
            return e + 1
    return None


def relabel(t: LoopTable, perm: Sequence[int] | dict[int, int]) -> LoopTable:
    """Apply the bijection old label -> new label to every row, column and entry.

    ``perm`` is either a mapping or a sequence whose k-th item is the new
    label of element k+1.
    """
    if isinstance(perm, dict):
        lab = np.array([perm[k] for k in t.elements()], dtype=np.int64) - 1
    else:
        lab = np.asarray(perm, dtype=np.int64) - 1
    if sorted(lab.tolist()) != list(range(t.n)):
        raise ValueError("relabeling is not a permutation of the elements")
    pre = np.argsort(lab)
    return LoopTable(lab[t._m[np.ix_(pre, pre)]])


def normalize(t: LoopTable) -> LoopTable:
    """Move the identity element to label 1 by swapping it with 1."""
    if t.normal:
        return t
    e = identity_element(t)
    if e is None:
        raise NoIdentity("table has no two-sided identity element")
    perm = list(t.elements())
    perm[0], perm[e - 1] = e, 1
    return relabel(t, perm)


def transpose(t: LoopTable) -> LoopTable:
    return LoopTable(t._m.T)


def _inverse_arrays(m: np.ndarray, e: int = 0) -> tuple[np.ndarray, np.ndarray]:
    # left[l] solves x*l = e, right[l] solves l*x = e
    left = np.argmax(m == e, axis=0)
    right = np.argmax(m == e, axis=1)
    return left, right


def inverse_maps(t: LoopTable) -> InverseMaps:
    _require_normal(t)
    left, right = _inverse_arrays(t._m)
    lmap = {k + 1: int(v) + 1 for k, v in enumerate(left)}
    rmap = {k + 1: int(v) + 1 for k, v in enumerate(right)}
    return InverseMaps(lmap, rmap, dict(lmap) if (left == right).all() else None)


def two_sided_inverse(t: LoopTable) -> np.ndarray | None:
    """0-based two-sided inverse array for a normal table, or None."""
    left, right = _inverse_arrays(t._m)
    return left if (left == right).all() else None


def is_invertible(t: LoopTable) -> bool:
    e = identity_element(t)
    if e is None:
        return False
    left, right = _inverse_arrays(t._m, e - 1)
    return bool((left == right).all())


def associating_triples(m: np.ndarray) -> np.ndarray:
    """Boolean n x n x n array: (a*b)*c == a*(b*c)."""
    return m[m, :] == m[:, m]


def axiom_profile(t: LoopTable) -> AxiomProfile:
    m = t._m
    e = identity_element(t)
    has_identity = e is not None
    invertible = is_invertible(t) if has_identity else False
    abelian = bool((m == m.T).all())
    ok = associating_triples(m)
    associative = bool(ok.all())
    witness = None
    if not associative:
        a, b, c = np.argwhere(~ok)[0]
        witness = (int(a) + 1, int(b) + 1, int(c) + 1)
    if not has_identity:
        kind = "quasigroup"
    elif not invertible:
        kind = "loop"
    elif associative:
        kind = "group"
    else:
        kind = "NAFIL"
    return AxiomProfile(has_identity, invertible, abelian, associative, witness, kind)


def chain_product(t: LoopTable, side: str, seq: Sequence[int]) -> int:
    if not seq:
        raise EmptySequence("chain product of an empty sequence")
    acc = seq[0] - 1
    for x in seq[1:]:
        if side == RIGHT:
            acc = t._m[acc, x - 1]
        elif side == LEFT:
            acc = t._m[x - 1, acc]
        else:
            raise ValueError(f"side must be 'left' or 'right', not {side!r}")
    return int(acc) + 1


def power(t: LoopTable, x: int, m: int, side: str) -> int:
    if m < 1:
        raise ValueError("power exponent must be positive")
    return chain_product(t, side, [x] * m)


def p_order(t: LoopTable, x: int, side: str) -> int | None:
    """Least m <= n with the m-th left/right power equal to 1, else None."""
    _require_normal(t)
    acc = x - 1
    for m in range(1, t.n + 1):
        if acc == 0:
            return m
        acc = t._m[acc, x - 1] if side == RIGHT else t._m[x - 1, acc]
    return None


def _closure(m: np.ndarray, seed: Iterable[int]) -> frozenset[int]:
    # 0-based product closure
    have = set(seed) | {0}
    frontier = list(have)
    while frontier:
        new = set()
        cur = list(have)
        for a in frontier:
            new.update(m[a, cur].tolist())
            new.update(m[cur, a].tolist())
        new -= have
        have |= new
        frontier = list(new)
    return frozenset(have)


def generated_subloop(t: LoopTable, seed: Iterable[int]) -> tuple[int, ...]:
    _require_normal(t)
    seed = [s - 1 for s in seed]
    if not seed:
        raise EmptySequence("generated_subloop needs a non-empty seed")
    return tuple(sorted(x + 1 for x in _closure(t._m, seed)))


def all_subloops(t: LoopTable) -> list[tuple[int, ...]]:
    """Every product-closed subset containing 1, ordered by (size, elements)."""
    _require_normal(t)
    m = t._m
    found = {_closure(m, [x]) for x in range(t.n)}
    pending = list(found)
    while pending:
        fresh = set()
        known = list(found)
        for h in pending:
            for k in known:
                if h <= k or k <= h:
                    continue
                j = _closure(m, h | k)
                if j not in found:
                    fresh.add(j)
        found |= fresh
        pending = list(fresh)
    subs = [tuple(sorted(x + 1 for x in h)) for h in found]
    return sorted(subs, key=lambda s: (len(s), s))


def subtable(t: LoopTable, elements: Sequence[int]) -> LoopTable:
    """Restrict to a product-closed subset, relabelled 1..m in ascending order."""
    els = sorted(elements)
    index = {x: k for k, x in enumerate(els)}
    rows = [[index[product(t, a, b)] + 1 for b in els] for a in els]
    return build_table(len(els), rows)


def element_order(t: LoopTable, x: int) -> int:
    return len(generated_subloop(t, [x]))


def structural_profile(t: LoopTable) -> StructuralProfile:
    _require_normal(t)
    if two_sided_inverse(t) is None:
        raise NotInvertible("structural profile needs a two-sided inverse for every element")
    m = t._m
    n = t.n
    orders = {}
    pap = True
    for x in range(n):
        h = sorted(_closure(m, [x]))
        orders[x + 1] = len(h)
        if pap:
            sub = m[np.ix_(h, h)]
            pos = np.searchsorted(h, sub)
            pap = bool(associating_triples(pos).all())
    gens = tuple(x for x, k in orders.items() if k == n)
    unipotent = bool((np.diag(m) == 0).all())
    monassoc = unipotent and all(k == 2 for x, k in orders.items() if x != 1)
    porders = {x: (p_order(t, x, LEFT), p_order(t, x, RIGHT)) for x in t.elements()}
    return StructuralProfile(
        unipotent=unipotent,
        monassociative=monassoc,
        power_associative=pap,
        monogenic=bool(gens),
        generators=gens,
        p_orders=porders,
        element_orders=orders,
    )


def power_law_holds(t: LoopTable) -> bool:
    """x^a * x^b == x^(a+b) with right powers, for every x and a + b <= 2n."""
    n = t.n
    for x in t.elements():
        pw = [None, x]
        for k in range(2, 2 * n + 1):
            pw.append(product(t, pw[-1], x))
        for a in range(1, 2 * n):
            for b in range(1, 2 * n - a + 1):
                if product(t, pw[a], pw[b]) != pw[a + b]:
                    return False
    return True


def proper_subloops(t: LoopTable) -> list[tuple[int, ...]]:
    return [h for h in all_subloops(t) if len(h) < t.n]
