"""Built-in loop tables and the Cayley-Dickson basis loops.

LSAIP9 differs from the published order-9 matrix in one cell: row 7 was
printed as ``7 8 9 6 4 5 1 3 3``, which repeats 3. Cell (7, 8) is set to 2,
the only value that makes the row and column 8 Latin and matches the
transpose of RSAIP9. The printed matrix is kept as ``LSAIP9_raw``.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .errors import CeilingExceeded, UnknownName
from .table import LoopTable, build_table

_L5 = (
    (1, 2, 3, 4, 5),
    (2, 1, 5, 3, 4),
    (3, 4, 1, 5, 2),
    (4, 5, 2, 1, 3),
    (5, 3, 4, 2, 1),
)

_L6 = (
    (1, 2, 3, 4, 5, 6),
    (2, 1, 4, 5, 6, 3),
    (3, 4, 1, 6, 2, 5),
    (4, 5, 6, 1, 3, 2),
    (5, 6, 2, 3, 1, 4),
    (6, 3, 5, 2, 4, 1),
)

_LSAIP9_RAW = (
    (1, 2, 3, 4, 5, 6, 7, 8, 9),
    (2, 3, 4, 1, 6, 7, 8, 9, 5),
    (3, 4, 1, 2, 7, 8, 9, 5, 6),
    (4, 1, 2, 3, 8, 9, 5, 6, 7),
    (5, 6, 7, 9, 1, 2, 3, 4, 8),
    (6, 7, 8, 5, 9, 1, 2, 3, 4),
    (7, 8, 9, 6, 4, 5, 1, 3, 3),
    (8, 9, 5, 7, 3, 4, 6, 1, 2),
    (9, 5, 6, 8, 2, 3, 4, 7, 1),
)

_RSAIP9 = (
    (1, 2, 3, 4, 5, 6, 7, 8, 9),
    (2, 3, 4, 1, 6, 7, 8, 9, 5),
    (3, 4, 1, 2, 7, 8, 9, 5, 6),
    (4, 1, 2, 3, 9, 5, 6, 7, 8),
    (5, 6, 7, 8, 1, 9, 4, 3, 2),
    (6, 7, 8, 9, 2, 1, 5, 4, 3),
    (7, 8, 9, 5, 3, 2, 1, 6, 4),
    (8, 9, 5, 6, 4, 3, 2, 1, 7),
    (9, 5, 6, 7, 8, 4, 3, 2, 1),
)

LSAIP9_REPAIR = (7, 8, 2)  # (row, column, value), 1-based


def _repaired_lsaip9():
    rows = [list(r) for r in _LSAIP9_RAW]
    r, c, v = LSAIP9_REPAIR
    rows[r - 1][c - 1] = v
    return rows


NAMES = ("L5", "L6", "LSAIP9", "RSAIP9", "LSAIP9_raw")


class RawMatrix:
    """An unvalidated matrix, as printed; build_table(raw.n, raw.rows) may fail."""

    def __init__(self, rows):
        self.rows = tuple(tuple(r) for r in rows)
        self.n = len(rows)

    def __repr__(self):
        return f"RawMatrix(n={self.n})"


def builtin(name: str):
    """Fixture by name. ``LSAIP9_raw`` is returned as an unvalidated RawMatrix."""
    if name == "L5":
        return build_table(5, _L5)
    if name == "L6":
        return build_table(6, _L6)
    if name == "LSAIP9":
        return build_table(9, _repaired_lsaip9())
    if name == "RSAIP9":
        return build_table(9, _RSAIP9)
    if name == "LSAIP9_raw":
        return RawMatrix(_LSAIP9_RAW)
    raise UnknownName(f"unknown fixture {name!r}; known: {', '.join(NAMES)}")


CAYLEY_CEILING = 5


@lru_cache(maxsize=None)
def _basis_table(r: int) -> tuple[tuple[tuple[int, int], ...], ...]:
    # prod[i][j] = (sign, k) with e_i e_j = sign * e_k in the 2^r-dimensional algebra
    if r == 0:
        return (((1, 0),),)
    half = _basis_table(r - 1)
    h = 1 << (r - 1)

    def mul(i, j):
        return half[i][j]

    def conj(i):
        return (1, i) if i == 0 else (-1, i)

    rows = []
    for i in range(2 * h):
        row = []
        for j in range(2 * h):
            if i < h and j < h:
                s, k = mul(i, j)
            elif i < h:
                # (u,0)(0,v) = (0, v u)
                s, k = mul(j - h, i)
                k += h
            elif j < h:
                # (0,u)(v,0) = (0, u conj(v))
                cs, cv = conj(j)
                s, k = mul(i - h, cv)
                s *= cs
                k += h
            else:
                # (0,u)(0,v) = (-conj(v) u, 0)
                cs, cv = conj(j - h)
                s, k = mul(cv, i - h)
                s *= -cs
            row.append((s, k))
        rows.append(tuple(row))
    return tuple(rows)


def basis_label(sign: int, index: int) -> int:
    """Loop element for sign * e_index: +e_i -> 2i+1, -e_i -> 2i+2."""
    return 2 * index + (1 if sign > 0 else 2)


def cayley_basis_loop(r: int, ceiling: int = CAYLEY_CEILING) -> LoopTable:
    """Multiplication table of the signed basis {+-e_i} of the 2^r-dimensional algebra."""
    if r < 0:
        raise ValueError("r must be non-negative")
    if r > ceiling:
        raise CeilingExceeded(f"r={r} exceeds the ceiling {ceiling}")
    prod = _basis_table(r)
    dim = 1 << r
    n = 2 * dim
    m = np.empty((n, n), dtype=np.int64)
    for i in range(dim):
        for si in (1, -1):
            a = basis_label(si, i)
            for j in range(dim):
                for sj in (1, -1):
                    s, k = prod[i][j]
                    m[a - 1, basis_label(sj, j) - 1] = basis_label(s * si * sj, k)
    # +e_0 already carries label 1, so the table comes out normal
    return build_table(n, m.tolist())
