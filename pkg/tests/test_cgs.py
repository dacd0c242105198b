import random
from fractions import Fraction as F

import pytest

from intervalgb import (
    BlockOrder,
    GrevLex,
    Lex,
    Polynomial,
    PolynomialError,
    is_consistent,
    md_basis,
    pgb,
    pgb_main,
)
from intervalgb.parse import parse_polynomial

from oracles import specialization_ok

VARS = ("x", "y")
PARAMS = ("a", "b", "c")
GENS = VARS + PARAMS


def P(text, gens=GENS):
    return parse_polynomial(text, gens)


def canon(ps, gens):
    """Polynomials up to nonzero scaling, with {1} and {} identified for N."""
    out = set()
    for p in ps:
        p = p.to_ring(gens).primitive(GrevLex())
        if p.lc(GrevLex()) < 0:
            p = -p
        out.add(p)
    return frozenset(out)


def branch_key(br):
    one = frozenset({Polynomial.constant(PARAMS, 1)})
    N = canon(br.N, PARAMS)
    return (canon(br.E, PARAMS), frozenset() if N == one else N, canon(br.G, GENS))


CYCLIC = ["a*x - b", "b*y - a", "c*x^2 - y", "c*y^2 - x"]
CYCLIC_E = ["a^6 - b^6", "a^3*c - b^3", "b^3*c - a^3", "a*c^2 - a", "b*c^2 - b"]
CYCLIC_TABLE = [
    ([], CYCLIC_E, ["1"]),
    (CYCLIC_E, ["b"], ["b*x - a*c*y", "b*y - a"]),
    (["a", "b"], ["c"], ["c*x^2 - y", "c*y^2 - x"]),
    (["a", "b", "c"], [], ["x", "y"]),
]


def cyclic_system():
    return pgb([P(t) for t in CYCLIC], VARS, PARAMS, GrevLex(), GrevLex())


class TestMDBasis:
    order = Lex()

    def test_divisible_dropped(self):
        ps = [P("a*x^2 + 1"), P("b*x*y - 1"), P("x^2*y + c")]
        assert md_basis(ps, 2, self.order) == ps[:2]

    def test_singleton(self):
        ps = [P("a*x - b")]
        assert md_basis(ps, 2, self.order) == ps

    def test_incomparable(self):
        ps = [P("a*x^2 - 1"), P("b*y^2 - 1"), P("c*x*y - 1")]
        assert md_basis(ps, 2, self.order) == ps

    def test_tie_keeps_smaller_coefficient(self):
        ps = [P("a^2*x - 1"), P("a*x - b")]
        assert md_basis(ps, 2, self.order) == [ps[1]]

    def test_parameter_only_rejected(self):
        with pytest.raises(PolynomialError):
            md_basis([P("a - b")], 2, self.order)

    def test_minimality(self):
        ps = [P("a*x^3 - 1"), P("b*x^2*y - c"), P("c*y^2 - 1"), P("x*y^3 + a"), P("b*x^2 - y")]
        kept = md_basis(ps, 2, self.order)
        lms = [p.lm(self.order)[:2] for p in ps]
        kept_lms = [p.lm(self.order)[:2] for p in kept]

        def covers(basis):
            return all(any(all(a >= b for a, b in zip(m, k)) for k in basis) for m in lms)

        assert covers(kept_lms)
        for i in range(len(kept_lms)):
            assert not covers(kept_lms[:i] + kept_lms[i + 1:])


class TestIsConsistent:
    abc = ("a", "b")

    def test_trivial(self):
        assert is_consistent([], [Polynomial.constant(self.abc, 1)])

    def test_self(self):
        a = P("a", self.abc)
        assert not is_consistent([a], [a])

    def test_product(self):
        assert is_consistent([P("a*b", self.abc)], [P("a", self.abc)])


class TestPGB:
    def test_cyclic_system(self):
        res = cyclic_system()
        got = [branch_key(b) for b in res]
        want = []
        for E, N, G in CYCLIC_TABLE:
            want.append((canon([P(t, PARAMS) for t in E], PARAMS),
                         canon([P(t, PARAMS) for t in N], PARAMS),
                         canon([P(t) for t in G], GENS)))
        assert sorted(map(repr, got)) == sorted(map(repr, want))
        assert len(got) == 4

    def test_specialization_at_ones(self):
        res = cyclic_system()
        pt = {"a": 1, "b": 1, "c": 1}
        covering = [b for b in res if b.covers(pt)]
        assert len(covering) == 1
        sG = {g.evaluate(pt).to_ring(VARS) for g in covering[0].G}
        assert sG == {P("x - y", VARS), P("y - 1", VARS)}
        assert specialization_ok([P(t) for t in CYCLIC], covering[0].G, pt, VARS, GrevLex())

    def test_no_parameters(self):
        res = pgb([parse_polynomial("x^2 + 1", ("x",))], ("x",), (), Lex())
        assert len(res) == 1
        assert [str(g.format()) for g in res.branches[0].G] == ["x^2 + 1"]

    def test_single_linear(self):
        res = pgb([P("a*x - 1", ("x", "a"))], ("x",), ("a",), Lex())
        got = [(b.E, b.N, b.G) for b in res]
        a = Polynomial.var(("a",), "a")
        one = Polynomial.constant(("a",), 1)
        assert got == [([], [a], [P("a*x - 1", ("x", "a"))]),
                       ([a], [one], [Polynomial.constant(("x", "a"), 1)])]

    def test_main_with_conditions(self):
        order = BlockOrder(GrevLex(), 2, GrevLex())
        P_ = [P(t) for t in CYCLIC]
        out = pgb_main(P_, [P("a"), P("b")], [Polynomial.constant(GENS, 1)], order, PARAMS)
        keys = {branch_key(b) for b in out}
        assert (canon([P("a", PARAMS), P("b", PARAMS), P("c", PARAMS)], PARAMS), frozenset(),
                canon([P("x"), P("y")], GENS)) in keys


def _structured_points(rng, n):
    """Random parameter points, biased towards the special strata of the cyclic system."""
    pts = []
    for k in range(n):
        a, b, c = (F(rng.randint(-6, 6), rng.randint(1, 3)) for _ in range(3))
        mode = k % 5
        if mode == 1:
            a = b = F(0)
        elif mode == 2:
            a = b = c = F(0)
        elif mode == 3:
            b, c = a, F(1)
        elif mode == 4:
            b, c = -a, F(-1)
        pts.append({"a": a, "b": b, "c": c})
    return pts


def test_cover_and_specialization_sampling():
    res = cyclic_system()
    P_ = [P(t) for t in CYCLIC]
    rng = random.Random(56)
    pts = _structured_points(rng, 120)
    violations = 0
    for pt in pts:
        covering = [b for b in res if b.covers(pt)]
        if not covering:
            violations += 1
            continue
        for br in covering:
            if not specialization_ok(P_, br.G, pt, VARS, GrevLex()):
                violations += 1
    assert len(pts) >= 100
    assert violations == 0


def test_generic_branch_specializes():
    """On V(G_r) minus the zero set of the product of leading coefficients the basis specializes."""
    res = cyclic_system()
    generic = [b for b in res if len(b.G) == 2 and b.E][0]
    P_ = [P(t) for t in CYCLIC]
    for a in range(1, 6):
        for c in (1, -1):
            b = a * c
            pt = {"a": F(a), "b": F(b), "c": F(c)}
            if all(e(pt) == 0 for e in generic.E):
                assert specialization_ok(P_, generic.G, pt, VARS, GrevLex())
