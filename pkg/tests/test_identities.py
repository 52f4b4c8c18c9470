import itertools

import pytest
from hypothesis import given, strategies as st

from nafil.catalog import builtin, cayley_basis_loop
from nafil.errors import (
    AmbiguousProduct,
    EmptySide,
    IdentitySyntaxError,
    InverseUnavailable,
    TooManyVariables,
    UnknownName,
)
from nafil.identities import (
    PROPERTY_ORDER,
    Conjunction,
    Ident,
    Identity,
    Inv,
    Mul,
    Var,
    builtin_identities,
    check_identity,
    check_property,
    evaluate_term,
    lookup,
    parse_identity,
    property_report,
    resolve,
    saip_aliases,
)
from nafil.table import build_table, inverse_maps, product, transpose

from conftest import cyclic, invertible_loops

SMALL = [t for n in (4, 5, 6) for t in invertible_loops(n)[::41]] + [builtin("L5"), builtin("L6")]


def oracle_eval(t, term, env, inv):
    if isinstance(term, Var):
        return env[term.name]
    if isinstance(term, Ident):
        return 1
    if isinstance(term, Inv):
        return inv[oracle_eval(t, term.child, env, inv)]
    return product(t, oracle_eval(t, term.lhs, env, inv), oracle_eval(t, term.rhs, env, inv))


def oracle_check(t, ident):
    inv = inverse_maps(t).two_sided
    for values in itertools.product(t.elements(), repeat=len(ident.vars)):
        env = dict(zip(ident.vars, values))
        if oracle_eval(t, ident.lhs, env, inv) != oracle_eval(t, ident.rhs, env, inv):
            return env
    return None


def mirror(term):
    if isinstance(term, Mul):
        return Mul(mirror(term.rhs), mirror(term.lhs))
    if isinstance(term, Inv):
        return Inv(mirror(term.child))
    return term


def terms(max_leaves=5):
    leaf = st.sampled_from([Var("x"), Var("y"), Var("z"), Ident()])
    return st.recursive(
        leaf,
        lambda sub: st.one_of(st.builds(Mul, sub, sub), st.builds(Inv, sub)),
        max_leaves=max_leaves,
    )


class TestParser:
    def test_associativity(self):
        i = parse_identity("(x*y)*z = x*(y*z)")
        assert i.vars == ("x", "y", "z")
        assert i.size == 3 and i.balanced
        assert i.lhs == Mul(Mul(Var("x"), Var("y")), Var("z"))

    def test_moufang_matches_catalog(self):
        assert parse_identity("x*(y*(x*z)) = ((x*y)*x)*z") == lookup("MP")
        assert not lookup("MP").balanced

    def test_inverse_and_identity(self):
        i = parse_identity("x'*(x*y) = y")
        assert i.lhs.lhs == Inv(Var("x"))
        assert parse_identity("x*e = x").rhs == Var("x")
        assert parse_identity("(x*y)'' = x*y").lhs == Inv(Inv(Mul(Var("x"), Var("y"))))

    def test_ambiguous(self):
        with pytest.raises(AmbiguousProduct):
            parse_identity("x*y*z = z")

    @pytest.mark.parametrize("text", ["= x", "x =", "x = ", ""])
    def test_empty_side(self, text):
        with pytest.raises(EmptySide):
            parse_identity(text)

    @pytest.mark.parametrize("text", ["(x*y = x", "x = y)", "x + y = y", "x y = y", "x = = y"])
    def test_syntax_errors_carry_position(self, text):
        with pytest.raises(IdentitySyntaxError) as exc:
            parse_identity(text)
        assert 0 <= exc.value.position <= len(text)

    def test_too_many_variables(self):
        parse_identity("(x*y)*(z*w) = (x*z)*(y*w)")
        with pytest.raises(TooManyVariables):
            parse_identity("(x*y)*(z*w) = v")

    @given(terms(), terms())
    def test_str_round_trip(self, lhs, rhs):
        ident = Identity(lhs, rhs)
        assert parse_identity(str(ident)) == ident


class TestCatalog:
    def test_entries(self):
        assert str(lookup("CIP")) == "(x*y)*x' = y"
        assert lookup("RCC") == parse_identity("(x*y)*z=(x*z)*((z'*y)*z)")
        cat = builtin_identities()
        for name in PROPERTY_ORDER:
            if name != "PAP":
                assert name in cat

    def test_conjunctions(self):
        ip = lookup("IP")
        assert isinstance(ip, Conjunction)
        assert [p for p, _ in ip.parts] == ["LIP", "RIP"]

    def test_unknown(self):
        with pytest.raises(UnknownName):
            lookup("NOPE")

    def test_resolve(self):
        assert resolve("FL") == lookup("FL")
        assert resolve("x*y = y*x").vars == ("x", "y")

    def test_saip_aliases_are_opposite_forms(self):
        a = saip_aliases()
        assert {a["LSAIP"], a["RSAIP"]} == {"SAIP-A", "SAIP-B"}


class TestCheck:
    def test_l5_flexible(self, L5):
        assert check_identity(L5, lookup("FL")).holds

    def test_l5_lip_counterexample(self, L5):
        v = check_identity(L5, lookup("LIP"))
        assert not v.holds
        c = v.counterexample
        assert c.assignment == {"x": 2, "y": 3}
        assert (c.lhs, c.rhs) == (4, 3)

    def test_l5_cip(self, L5):
        assert check_identity(L5, lookup("CIP")).holds

    def test_conjunction_names_failing_part(self, L5):
        v = check_property(L5, lookup("IP"))
        assert not v.holds and v.counterexample.part == "LIP"

    def test_inverse_needed(self):
        t = build_table(5, [
            [1, 2, 3, 4, 5],
            [2, 1, 4, 5, 3],
            [3, 5, 2, 1, 4],
            [4, 3, 5, 2, 1],
            [5, 4, 1, 3, 2],
        ])
        with pytest.raises(InverseUnavailable):
            check_identity(t, lookup("LIP"))
        r = property_report(t)
        assert r.verdicts["LIP"].status == "unavailable"
        assert r.verdicts["FL"].status in ("holds", "fails")
        assert r.structural is None

    def test_cayley_octonions(self):
        t = cayley_basis_loop(3)
        for name in ("IP", "AP", "FL", "MP"):
            assert check_property(t, lookup(name)).holds, name

    def test_variable_free(self):
        assert check_identity(cyclic(3), parse_identity("e*e = e")).holds
        assert check_identity(cyclic(3), parse_identity("e = e'*e")).holds
        v = check_identity(cyclic(3), parse_identity("x*x = e"))
        assert not v.holds and v.counterexample.assignment == {"x": 2}

    @pytest.mark.parametrize("name", [k for k in PROPERTY_ORDER if k not in ("PAP",)])
    def test_catalog_against_oracle(self, name):
        prop = lookup(name)
        parts = prop.parts if isinstance(prop, Conjunction) else (("", prop),)
        for t in SMALL:
            want = all(oracle_check(t, i) is None for _, i in parts)
            assert check_property(t, prop).holds == want

    @given(terms(), terms(), st.sampled_from(range(len(SMALL))))
    def test_random_identities_against_oracle(self, lhs, rhs, k):
        t = SMALL[k]
        ident = Identity(lhs, rhs)
        v = check_identity(t, ident)
        first = oracle_check(t, ident)
        assert v.holds == (first is None)
        if first is not None:
            # the reported counterexample is the lexicographically first and re-evaluates
            assert v.counterexample.assignment == first
            c = v.counterexample
            assert evaluate_term(t, ident.lhs, c.assignment) == c.lhs
            assert evaluate_term(t, ident.rhs, c.assignment) == c.rhs
            assert c.lhs != c.rhs

    @given(terms(), terms(), st.sampled_from(range(len(SMALL))))
    def test_transpose_duality(self, lhs, rhs, k):
        t = SMALL[k]
        a = check_identity(t, Identity(lhs, rhs)).holds
        b = check_identity(transpose(t), Identity(mirror(lhs), mirror(rhs))).holds
        assert a == b

    def test_named_duals(self):
        pairs = [("LIP", "RIP"), ("LAP", "RAP"), ("LBol", "RBol"), ("LCC", "RCC"),
                 ("SAIP-A", "SAIP-B")]
        for t in SMALL + [builtin("LSAIP9"), builtin("RSAIP9")]:
            for l, r in pairs:
                assert check_identity(t, lookup(l)).holds == check_identity(transpose(t), lookup(r)).holds


class TestReport:
    def test_l5(self, L5):
        r = property_report(L5)
        assert r.order == 5
        assert r.axiom_profile.classification == "NAFIL"
        for name in ("CIP", "WIP", "AIP", "FL", "PAP"):
            assert r.verdicts[name].holds, name
        for name in ("LIP", "RIP", "IP", "MP", "LAP", "RAP"):
            assert not r.verdicts[name].holds, name
        assert list(r.verdicts) == list(PROPERTY_ORDER)

    def test_order9_pair(self, LSAIP9, RSAIP9):
        left = property_report(LSAIP9).verdicts
        right = property_report(RSAIP9).verdicts
        assert left["SAIP-B"].holds and not left["SAIP-A"].holds
        assert right["SAIP-A"].holds and not right["SAIP-B"].holds
        assert left["LSAIP"].holds and right["RSAIP"].holds
        assert left["PAP"].holds and right["PAP"].holds

    def test_trivial_is_group(self):
        assert property_report(build_table(1, [[1]])).axiom_profile.classification == "group"
