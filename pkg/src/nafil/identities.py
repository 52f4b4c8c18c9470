"""A small language for loop identities and an exhaustive finite-model checker.

Concrete syntax::

    identity := term "=" term
    term     := factor [ "*" factor ]
    factor   := primary { "'" }
    primary  := variable | "e" | "(" term ")"

A variable is any single letter other than ``e``; ``'`` is the two-sided
inverse and ``e`` the identity. Products are binary and never associate
implicitly, so ``x*y*z`` is rejected.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Union

import numpy as np

from .errors import (
    AmbiguousProduct,
    EmptySide,
    IdentitySyntaxError,
    InverseUnavailable,
    NotNormal,
    TooManyVariables,
    UnknownName,
)
from .table import (
    AxiomProfile,
    LoopTable,
    StructuralProfile,
    axiom_profile,
    structural_profile,
    two_sided_inverse,
)

MAX_VARIABLES = 4


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Ident:
    pass


@dataclass(frozen=True)
class Inv:
    child: "Term"


@dataclass(frozen=True)
class Mul:
    lhs: "Term"
    rhs: "Term"


Term = Union[Var, Ident, Inv, Mul]


def term_str(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Ident):
        return "e"
    if isinstance(t, Inv):
        inner = term_str(t.child)
        return f"({inner})'" if isinstance(t.child, Mul) else f"{inner}'"
    parts = []
    for side in (t.lhs, t.rhs):
        s = term_str(side)
        parts.append(f"({s})" if isinstance(side, Mul) else s)
    return "*".join(parts)


def _variables(t: Term, acc: list[str]) -> list[str]:
    if isinstance(t, Var):
        acc.append(t.name)
    elif isinstance(t, Inv):
        _variables(t.child, acc)
    elif isinstance(t, Mul):
        _variables(t.lhs, acc)
        _variables(t.rhs, acc)
    return acc


def uses_inverse(t: Term) -> bool:
    if isinstance(t, Inv):
        return True
    if isinstance(t, Mul):
        return uses_inverse(t.lhs) or uses_inverse(t.rhs)
    return False


@dataclass(frozen=True)
class Identity:
    lhs: Term
    rhs: Term
    vars: tuple[str, ...] = field(init=False)
    size: int = field(init=False)
    balanced: bool = field(init=False)

    def __post_init__(self):
        left = _variables(self.lhs, [])
        right = _variables(self.rhs, [])
        names = tuple(dict.fromkeys(left + right))
        if len(names) > MAX_VARIABLES:
            raise TooManyVariables(f"{len(names)} variables; at most {MAX_VARIABLES} allowed")
        object.__setattr__(self, "vars", names)
        object.__setattr__(self, "size", max(len(left), len(right)))
        balanced = all(left.count(v) == 1 and right.count(v) == 1 for v in names)
        object.__setattr__(self, "balanced", balanced)

    @property
    def uses_inverse(self) -> bool:
        return uses_inverse(self.lhs) or uses_inverse(self.rhs)

    def __str__(self):
        return f"{term_str(self.lhs)} = {term_str(self.rhs)}"


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = [(i, c) for i, c in enumerate(text) if not c.isspace()]
        self.pos = 0

    def peek(self):
        return self.toks[self.pos][1] if self.pos < len(self.toks) else None

    def where(self) -> int:
        return self.toks[self.pos][0] if self.pos < len(self.toks) else len(self.text)

    def take(self, ch: str) -> None:
        if self.peek() != ch:
            raise IdentitySyntaxError(f"unexpected {self._describe()}", self.where(), [repr(ch)])
        self.pos += 1

    def _describe(self) -> str:
        c = self.peek()
        return "end of input" if c is None else repr(c)

    def identity(self) -> Identity:
        if self.peek() in ("=", None):
            raise EmptySide("left-hand side is empty", self.where(), ["term"])
        lhs = self.term()
        self.take("=")
        if self.peek() is None:
            raise EmptySide("right-hand side is empty", self.where(), ["term"])
        rhs = self.term()
        if self.peek() is not None:
            raise IdentitySyntaxError(
                f"unexpected {self._describe()}", self.where(), ["end of input"]
            )
        return Identity(lhs, rhs)

    def term(self) -> Term:
        left = self.factor()
        if self.peek() != "*":
            return left
        self.pos += 1
        right = self.factor()
        if self.peek() == "*":
            raise AmbiguousProduct(
                "products need explicit parentheses", self.where(), ["'='", "')'"]
            )
        return Mul(left, right)

    def factor(self) -> Term:
        t = self.primary()
        while self.peek() == "'":
            self.pos += 1
            t = Inv(t)
        return t

    def primary(self) -> Term:
        c = self.peek()
        if c == "(":
            self.pos += 1
            t = self.term()
            self.take(")")
            return t
        if c is not None and c.isalpha():
            self.pos += 1
            return Ident() if c == "e" else Var(c)
        raise IdentitySyntaxError(
            f"unexpected {self._describe()}", self.where(), ["variable", "'e'", "'('"]
        )


def parse_identity(text: str) -> Identity:
    return _Parser(text).identity()


# ---------------------------------------------------------------------------
# evaluation


@dataclass(frozen=True)
class Counterexample:
    assignment: dict[str, int]
    lhs: int
    rhs: int
    part: str | None = None

    def describe(self) -> str:
        return ", ".join(f"{k}={v}" for k, v in self.assignment.items())


@dataclass(frozen=True)
class Verdict:
    holds: bool
    counterexample: Counterexample | None = None
    available: bool = True

    @property
    def status(self) -> str:
        if not self.available:
            return "unavailable"
        return "holds" if self.holds else "fails"


HOLDS = Verdict(True)
UNAVAILABLE = Verdict(False, None, available=False)


def _evaluate(t: Term, m: np.ndarray, inv, env: dict[str, np.ndarray], shape) -> np.ndarray:
    if isinstance(t, Var):
        return env[t.name]
    if isinstance(t, Ident):
        return np.zeros(shape, dtype=np.int64)
    if isinstance(t, Inv):
        return inv[_evaluate(t.child, m, inv, env, shape)]
    return m[_evaluate(t.lhs, m, inv, env, shape), _evaluate(t.rhs, m, inv, env, shape)]


def evaluate_term(t: LoopTable, term: Term, assignment: dict[str, int]) -> int:
    """Value of ``term`` (1-based) under a single assignment."""
    inv = two_sided_inverse(t)
    if uses_inverse(term) and inv is None:
        raise InverseUnavailable("table has no two-sided inverse map")
    env = {k: np.array(v - 1) for k, v in assignment.items()}
    return int(_evaluate(term, t.zero_based.astype(np.int64), inv, env, ())) + 1


def check_identity(t: LoopTable, ident: Identity) -> Verdict:
    """Exhaustively check ``ident``; the counterexample is the lexicographically first."""
    if not t.normal:
        raise NotNormal("identity checks need a table in normal form")
    inv = two_sided_inverse(t)
    if ident.uses_inverse and inv is None:
        raise InverseUnavailable("table has no two-sided inverse map")
    n = t.n
    k = len(ident.vars)
    shape = (n,) * k
    grids = np.indices(shape) if k else np.zeros((0,), dtype=np.int64)
    env = {v: grids[i] for i, v in enumerate(ident.vars)}
    m = t.zero_based.astype(np.int64)
    lhs = np.broadcast_to(_evaluate(ident.lhs, m, inv, env, shape), shape)
    rhs = np.broadcast_to(_evaluate(ident.rhs, m, inv, env, shape), shape)
    bad = lhs != rhs
    if not bad.any():
        return HOLDS
    idx = np.unravel_index(int(np.argmax(bad)), shape) if k else ()
    assignment = {v: int(idx[i]) + 1 for i, v in enumerate(ident.vars)}
    return Verdict(False, Counterexample(assignment, int(lhs[idx]) + 1, int(rhs[idx]) + 1))


# ---------------------------------------------------------------------------
# catalog


@dataclass(frozen=True)
class Conjunction:
    """A property that holds when every named part holds."""

    parts: tuple[tuple[str, Identity], ...]

    @property
    def uses_inverse(self) -> bool:
        return any(i.uses_inverse for _, i in self.parts)


Property = Union[Identity, Conjunction]

_DEFINITIONS = {
    "LIP": "x'*(x*y) = y",
    "RIP": "(y*x)*x' = y",
    "LAP": "x*(x*y) = (x*x)*y",
    "RAP": "(x*y)*y = x*(y*y)",
    "FL": "x*(y*x) = (x*y)*x",
    "MP": "x*(y*(x*z)) = ((x*y)*x)*z",
    "MP2": "x*(y*(z*y)) = ((x*y)*z)*y",
    "MP3": "(x*y)*(z*x) = x*((y*z)*x)",
    "LBol": "(x*(y*x))*z = x*(y*(x*z))",
    "RBol": "((x*y)*z)*y = x*((y*z)*y)",
    "ELP": "(x*(y*z))*y = (x*y)*(z*y)",
    "ELP2": "(y*z)*(y*x) = y*((z*y)*x)",
    "ELP3": "((x*y)*z)*x = x*(y*(z*x))",
    "CP": "x*(y*(y*z)) = ((x*y)*y)*z",
    "RIFP": "(x*y)*(z*(x*y)) = ((x*(y*z))*x)*y",
    "AmP": "x*((y*x)*(z*x)) = ((x*y)*(x*z))*x",
    "WIP": "x*(y*x)' = y'",
    "AIP": "(x*y)' = x'*y'",
    "AAIP": "(x*y)' = y'*x'",
    "SAIP-A": "((x*y)*x)' = (x'*y')*x'",
    "SAIP-B": "(x*(y*x))' = x'*(y'*x')",
    "CIP": "(x*y)*x' = y",
    "LCC": "x*(y*z) = (x*(y*x'))*(x*z)",
    "RCC": "(x*y)*z = (x*z)*((z'*y)*z)",
}

_CONJUNCTIONS = {
    "IP": ("LIP", "RIP"),
    "AP": ("LAP", "RAP"),
    "SAIP": ("SAIP-A", "SAIP-B"),
    "CCP": ("LCC", "RCC"),
}

_TS_PARTS = (("TS-commutative", "x*y = y*x"), ("TS-symmetric", "x*(x*y) = y"))

# report order; PAP is decided structurally rather than by an equation
PROPERTY_ORDER = (
    "LIP", "RIP", "IP", "LAP", "RAP", "AP", "FL", "MP", "MP2", "MP3",
    "LBol", "RBol", "ELP", "ELP2", "ELP3", "CP", "RIFP", "AmP", "PAP", "TS",
    "WIP", "AIP", "AAIP", "SAIP-A", "SAIP-B", "LSAIP", "RSAIP", "SAIP",
    "CIP", "LCC", "RCC", "CCP",
)


@lru_cache(maxsize=1)
def saip_aliases() -> dict[str, str]:
    """Map LSAIP/RSAIP onto SAIP-A/SAIP-B using the order-9 LSAIP fixture."""
    from .catalog import builtin

    fixture = builtin("LSAIP9")
    holds = {
        name: check_identity(fixture, parse_identity(_DEFINITIONS[name])).holds
        for name in ("SAIP-A", "SAIP-B")
    }
    if holds["SAIP-A"] == holds["SAIP-B"]:
        raise RuntimeError("LSAIP9 fixture does not single out one SAIP form")
    left = "SAIP-A" if holds["SAIP-A"] else "SAIP-B"
    right = "SAIP-B" if left == "SAIP-A" else "SAIP-A"
    return {"LSAIP": left, "RSAIP": right}


@lru_cache(maxsize=1)
def _catalog() -> dict[str, Property]:
    cat: dict[str, Property] = {k: parse_identity(v) for k, v in _DEFINITIONS.items()}
    for name, parts in _CONJUNCTIONS.items():
        cat[name] = Conjunction(tuple((p, cat[p]) for p in parts))
    cat["TS"] = Conjunction(tuple((p, parse_identity(s)) for p, s in _TS_PARTS))
    for alias, target in saip_aliases().items():
        cat[alias] = cat[target]
    return cat


def builtin_identities() -> dict[str, Property]:
    """The full property catalog (PAP excluded: it is not a single equation)."""
    return dict(_catalog())


def lookup(name: str) -> Property:
    try:
        return _catalog()[name]
    except KeyError:
        raise UnknownName(f"unknown property {name!r}") from None


def check_property(t: LoopTable, prop: Property) -> Verdict:
    if isinstance(prop, Identity):
        return check_identity(t, prop)
    for name, ident in prop.parts:
        v = check_identity(t, ident)
        if not v.holds:
            c = v.counterexample
            return Verdict(False, Counterexample(c.assignment, c.lhs, c.rhs, part=name))
    return HOLDS


def resolve(spec: str) -> Property:
    """A catalog name, or else an identity in the concrete syntax."""
    if "=" in spec:
        return parse_identity(spec)
    return lookup(spec)


# ---------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class PropertyReport:
    order: int
    axiom_profile: AxiomProfile
    verdicts: dict[str, Verdict]
    structural: StructuralProfile | None


def property_report(t: LoopTable) -> PropertyReport:
    if not t.normal:
        raise NotNormal("property reports need a table in normal form")
    axioms = axiom_profile(t)
    invertible = axioms.invertible
    structural = structural_profile(t) if invertible else None
    verdicts: dict[str, Verdict] = {}
    for name in PROPERTY_ORDER:
        if name == "PAP":
            verdicts[name] = Verdict(structural.power_associative) if structural else UNAVAILABLE
            continue
        prop = lookup(name)
        if prop.uses_inverse and not invertible:
            verdicts[name] = UNAVAILABLE
        else:
            verdicts[name] = check_property(t, prop)
    return PropertyReport(t.n, axioms, verdicts, structural)


def as_identities(prop: Property) -> tuple[Identity, ...]:
    """The equations making up a property, for use as search constraints."""
    if isinstance(prop, Identity):
        return (prop,)
    return tuple(i for _, i in prop.parts)
