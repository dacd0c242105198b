import random
from fractions import Fraction as F

import pytest
import sympy

from intervalgb import (
    Interval,
    IntervalPolynomial,
    Lex,
    Polynomial,
    PolynomialError,
    epsilon_divides,
    fuzzy_solve,
    i_divides,
    normal_form,
    solve_univariate,
)
from intervalgb.parse import parse_expression, parse_polynomial, parse_problem
from intervalgb.realroots import from_polynomial

from oracles import sample_in, to_sympy

ROOT = __import__("pathlib").Path(__file__).resolve().parent.parent
X = ("x",)
XY = ("x", "y")


def ip(text, gens=X):
    return parse_expression(text, gens)


def admits_root(f: IntervalPolynomial, x) -> bool:
    """Some family member vanishes at ``x``: 0 lies in the sum of the term ranges."""
    total = Interval.point(0)
    for iv, m in f.terms:
        total = total + iv.scale(F(x) ** m[0])
    return total.contains(0)


class TestSolveUnivariate:
    def test_quadratic_root_set(self):
        rs = solve_univariate(ip("[-2,-1]*x^2 + [1,2]*x + [1,3]"))
        assert len(rs) == 2
        (a, b), (c, d) = (p.floats() for p in rs.parts)
        assert [round(v, 2) for v in (a, b, c, d)] == [-1.30, -0.37, 1.0, 3.0]
        lo, hi = rs.parts[0].lo, rs.parts[0].hi
        assert lo.sign_of(from_polynomial(parse_polynomial("x^2 - x - 3", X))) == 0
        assert hi.sign_of(from_polynomial(parse_polynomial("2*x^2 - 2*x - 1", X))) == 0
        assert rs.parts[1].lo.as_rational() == 1 and rs.parts[1].hi.as_rational() == 3
        assert all(p.lo_closed and p.hi_closed for p in rs.parts)

    def test_linear(self):
        rs = solve_univariate(ip("[1,2]*x + [2,4]"))
        assert len(rs) == 1
        p = rs.parts[0]
        assert (p.lo.as_rational(), p.hi.as_rational()) == (-4, -1)

    def test_degenerate(self):
        rs = solve_univariate(ip("x - 1"))
        assert len(rs) == 1 and rs.contains(1) and not rs.contains(F(1, 10 ** 9) + 1)

    def test_open_coefficient_endpoint(self):
        rs = solve_univariate(ip("x + [1,2)"))
        assert rs.contains(-1) and not rs.contains(-2)

    def test_multivariate_rejected(self):
        with pytest.raises(PolynomialError):
            solve_univariate(ip("x + y", XY))

    def test_no_roots(self):
        assert len(solve_univariate(ip("[1,2]*x^2 + [1,3]"))) == 0

    @pytest.mark.parametrize("text", [
        "[-2,-1]*x^2 + [1,2]*x + [1,3]",
        "[1,2]*x^3 + [-1,1)*x - [1/2,1]",
        "(0,1]*x^4 - [2,3]*x^2 + [1/2,1]",
        "[-1,1]*x + [2,3]",
    ])
    def test_two_sided(self, text):
        f = ip(text)
        rs = solve_univariate(f)
        rng = random.Random(len(text))
        inside = outside = 0
        while inside < 200 or outside < 200:
            x = F(rng.randint(-4000, 4000), rng.randint(1, 700))
            got = rs.contains(x)
            assert got == admits_root(f, x), (text, x)
            if got:
                inside += 1
            else:
                outside += 1
            if inside + outside > 20000:
                break
        assert outside >= 200

    def test_monte_carlo_roots_inside(self):
        f = ip("[-2,-1]*x^2 + [1,2]*x + [1,3]")
        parts = [p.floats() for p in solve_univariate(f).parts]
        rng = random.Random(35)
        for _ in range(500):
            member = f.family_member([sample_in(rng, iv) for iv, _ in f.terms])
            for r in sympy.Poly(to_sympy(member), sympy.Symbol("x")).real_roots():
                v = float(r)
                assert any(lo - 1e-12 <= v <= hi + 1e-12 for lo, hi in parts)


class TestIDivides:
    def test_binary_quadratic(self):
        f = ip("[-1,1]*x^2 + [-3,1]*y^2 + [1/2,2]*x*y", XY)
        g = parse_polynomial("x - 2*y", XY)
        rep = i_divides(g, f)
        assert rep.verdict
        params = ("h1", "h2", "h3")
        cond = {c.to_ring(params).primitive() for c in rep.condition}
        assert cond == {parse_polynomial("4*h1 + h2 + 2*h3", params)}
        p = rep.witness_polynomial
        assert not p.is_zero()
        assert normal_form(p, [g], Lex()).is_zero()
        for (iv, m) in f.terms:
            assert iv.contains(p.terms.get(m, 0))

    def test_divisible_by_x(self):
        rep = i_divides(parse_polynomial("x", X), ip("[1,2]*x^2 + [0,1]*x"))
        assert rep.verdict
        assert normal_form(rep.witness_polynomial, [parse_polynomial("x", X)], Lex()).is_zero()

    def test_unreachable(self):
        rep = i_divides(parse_polynomial("x - 5", X), ip("[1,2]*x + [1,2]"))
        assert not rep.verdict

    def test_zero_member_excluded(self):
        # only the zero member is divisible
        rep = i_divides(parse_polynomial("x - 1", X), ip("[0,1]*x + [0,1]"))
        assert not rep.verdict

    def test_zero_divisor(self):
        with pytest.raises(PolynomialError):
            i_divides(Polynomial.zero(X), ip("[0,1]*x + 1"))


class TestEpsilon:
    schedule = [F(1, 4), F(1, 2), F(1), F(2)]

    def test_widening(self):
        # at eps = 1 the only divisible member is the zero polynomial
        res = epsilon_divides(parse_polynomial("x + 1", X), parse_polynomial("x - 1", X), self.schedule)
        assert res.eps == 2
        assert res.tried == self.schedule
        p = res.report.witness_polynomial
        assert not p.is_zero() and normal_form(p, [parse_polynomial("x - 1", X)], Lex()).is_zero()

    def test_already_divisible(self):
        res = epsilon_divides(parse_polynomial("2*x - 2", X), parse_polynomial("x - 1", X), self.schedule)
        assert res.eps == F(1, 4)

    def test_identity(self):
        res = epsilon_divides(parse_polynomial("x", X), parse_polynomial("x", X), [F(1, 8)])
        assert res.eps == F(1, 8)

    def test_exhausted(self):
        res = epsilon_divides(parse_polynomial("x + 1", X), parse_polynomial("x - 1", X), [F(1, 4)])
        assert not res.success and res.report is not None

    def test_monotone(self):
        f, g = parse_polynomial("x + 1", X), parse_polynomial("x - 1", X)
        results = [epsilon_divides(f, g, [e]).success for e in (F(1, 2), F(3, 2), F(2), F(3))]
        assert results == sorted(results)


def _fuzzy(name):
    pf = parse_problem((ROOT / "problems" / name).read_text())
    h, h_box = pf.fuzzy
    return fuzzy_solve(pf.exact_polys(), pf.variables, h, h_box, pf.order, pf.signs)


class TestFuzzy:
    def test_solvable_at_endpoint(self):
        rep = _fuzzy("fuzzy_solvable.ppoly")
        assert len(rep.result) == 1
        br = rep.result.branches[0]
        assert br.E == [] and [n.format() for n in br.N] == ["h - 1"] and br.G[0].is_constant()
        assert rep.endpoint == 1 and rep.endpoint_solvable
        assert rep.consistency.consistent
        w = rep.endpoint_verdict.witness
        assert w["y"] == F(1, 2) and abs(float(w["x"]) + 1.473157368) < 1e-8

    def test_unsolvable_on_closed_range(self):
        rep = _fuzzy("fuzzy_unsolvable.ppoly")
        assert len(rep.result) == 1
        br = rep.result.branches[0]
        assert br.E == [] and br.G[0].is_constant()
        # (h - 1)(h + 3): no zero in [0, 1)
        assert [n.format() for n in br.N] == ["h^2 + 2*h - 3"]
        assert rep.endpoint_solvable is False
        assert rep.consistency.inconsistent

    def test_parameter_free(self):
        p = parse_polynomial("x^2 - y", XY)
        rep = fuzzy_solve([p], XY, "h", Interval(0, 1, True, False))
        assert len(rep.result) == 1 and not rep.result.branches[0].G[0].is_constant()

    def test_unsolvable_elimination_matches_sympy(self):
        pf = parse_problem((ROOT / "problems" / "fuzzy_unsolvable.ppoly").read_text())
        syms = sympy.symbols(pf.gens)
        G = sympy.groebner([to_sympy(p) for p in pf.exact_polys()], *syms, order="lex")
        h = sympy.Symbol("h")
        h_only = [g for g in G.exprs if g.free_symbols <= {h}]
        assert [sympy.factor(g) for g in h_only] == [sympy.factor((h - 1) * (h + 3))]
