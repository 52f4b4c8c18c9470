import functools
import itertools
import os

import numpy as np
import pytest
from hypothesis import settings

from nafil.catalog import builtin
from nafil.enumerate import EnumerationSpec, iter_batches
from nafil.table import LoopTable, build_table

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

RUN_LONG = os.environ.get("NAFIL_LONG") == "1"
long_only = pytest.mark.skipif(not RUN_LONG, reason="expected-long; set NAFIL_LONG=1")


def cyclic(n: int) -> LoopTable:
    return build_table(n, [[(i + j) % n + 1 for j in range(n)] for i in range(n)])


@functools.lru_cache(maxsize=None)
def invertible_loops(n: int, nonassoc: bool = False) -> tuple[LoopTable, ...]:
    """All reduced invertible loops of order n (groups included unless nonassoc)."""
    spec = EnumerationSpec(n, require_nonassociative=nonassoc)
    return tuple(LoopTable(m) for b in iter_batches(spec) for m in b)


def all_small_invertible():
    return [t for n in range(1, 7) for t in invertible_loops(n)]


def relabel_perm(n: int, rng) -> list[int]:
    """Random identity-fixing permutation as a 1-based list, perm[k-1] = image of k."""
    rest = list(rng.permutation(np.arange(2, n + 1)))
    return [1] + [int(v) for v in rest]


@pytest.fixture(scope="session")
def L5():
    return builtin("L5")


@pytest.fixture(scope="session")
def L6():
    return builtin("L6")


@pytest.fixture(scope="session")
def LSAIP9():
    return builtin("LSAIP9")


@pytest.fixture(scope="session")
def RSAIP9():
    return builtin("RSAIP9")


def brute_reduced_latin(n: int):
    """Reduced Latin squares by permutations of rows; independent of the search kernel."""
    perms = [p for p in itertools.permutations(range(n))]
    by_first = {}
    for p in perms:
        by_first.setdefault(p[0], []).append(p)
    out = []

    def rec(rows):
        i = len(rows)
        if i == n:
            out.append(np.array(rows))
            return
        for p in by_first[i]:
            if all(len({r[j] for r in rows} | {p[j]}) == i + 1 for j in range(n)):
                rec(rows + [p])

    rec([tuple(range(n))])
    return out


# acceptance bookkeeping: one line per criterion in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
