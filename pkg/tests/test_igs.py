import random
from fractions import Fraction as F

import pytest

from intervalgb import (
    Box,
    Interval,
    IntervalPolynomial,
    IntervalSystem,
    Lex,
    Polynomial,
    augment,
    igs,
    interval_is_consistent,
    parameterize,
    real_root_in_box,
    reduced_gb,
)
from intervalgb.igs import AugmentError, check_witness, witness_from_aux
from intervalgb.interval import parse_interval
from intervalgb.parse import parse_expression, parse_polynomial, parse_problem

from oracles import grid_search, sample_in, specialization_ok

ROOT = __import__("pathlib").Path(__file__).resolve().parent.parent
XY = ("x", "y")
H = ("h1", "h2", "h3", "h4", "h5")


def iv(text):
    return parse_interval(text)


def bilinear_system():
    polys = [parse_expression("[-1,2)*x*y + [0,1)*y + [3,5)", XY),
             parse_expression("[-3,1)*x*y^2 + [1,3)*y", XY)]
    return IntervalSystem(polys, XY)


def load(name):
    pf = parse_problem((ROOT / "problems" / name).read_text())
    return IntervalSystem(pf.interval_polys(), pf.variables), pf.order


@pytest.fixture(scope="module")
def igs5():
    return igs(bilinear_system(), Lex())


class TestParameterize:
    def test_bilinear_system(self):
        ps, box = parameterize(bilinear_system())
        gens = XY + H
        assert ps.parameters == H
        assert ps.polys == [parse_polynomial("h1*x*y + h2*y + h3", gens),
                            parse_polynomial("h4*x*y^2 + h5*y", gens)]
        assert [str(i) for _, i in box.coords] == ["[-1,2)", "[0,1)", "[3,5)", "[-3,1)", "[1,3)"]
        assert box.provenance == {"h1": (0, 0), "h2": (0, 1), "h3": (0, 2), "h4": (1, 0), "h5": (1, 1)}

    def test_degenerate(self):
        p = IntervalPolynomial.from_polynomial(parse_polynomial("x^2 - y", XY))
        ps, box = parameterize(IntervalSystem([p], XY))
        assert ps.parameters == () and len(box) == 0

    def test_repeated_interval(self):
        p = parse_expression("[0,1]*x + [0,1]*y", XY)
        ps, box = parameterize(IntervalSystem([p], XY))
        assert ps.parameters == ("h1", "h2")
        assert box["h1"] == box["h2"]


class TestAugment:
    def test_outside(self):
        a = Polynomial.var(("a",), "a")
        box = Box.of({"a": iv("[0,1)")})
        F_ = augment([a - 3], [Polynomial.constant(("a",), 1)], box)
        gens = ("a", "b_a", "c_1")
        assert F_ == [parse_polynomial("a - 3", gens), parse_polynomial("a + a*b_a^2 - b_a^2", gens),
                      parse_polynomial("c_1 - 1", gens)]
        # a = 3 forces b^2 = -3/2: complex points only
        assert not reduced_gb(F_, Lex()).is_unit

    def test_empty_e(self):
        box = Box.of({"a": iv("[0,1)")})
        F_ = augment([], [Polynomial.constant(("a",), 1)], box)
        pt = {"a": 0, "b_a": 0, "c_1": 1}
        assert all(f(pt) == 0 for f in F_)

    def test_unbounded_sides(self):
        gens = ("a", "b_a")
        left = augment([], [], Box.of({"a": iv("[2,inf)")}))
        right = augment([], [], Box.of({"a": iv("(-inf,2]")}))
        assert left == [parse_polynomial("a - 2 - b_a^2", gens)]
        assert right == [parse_polynomial("a - 2 + b_a^2", gens)]

    def test_unsupported(self):
        with pytest.raises(AugmentError):
            augment([], [], Box.of({"a": iv("(0,1)")}))

    def test_witness_reconstruction(self):
        rng = random.Random(3)
        for _ in range(100):
            lo = F(rng.randint(-9, 9), 2)
            box_iv = Interval(lo, lo + F(rng.randint(1, 9), 3), True, False)
            eta2 = F(rng.randint(0, 50), rng.randint(1, 7))
            g = witness_from_aux(box_iv, eta2)
            assert box_iv.contains(g)
            aux = augment([], [], Box.of({"a": box_iv}))[0]
            a = Polynomial.var(("a", "b_a"), "a")
            b = Polynomial.var(("a", "b_a"), "b_a")
            assert aux == a + (a - box_iv.hi) * b * b - box_iv.lo
            # b enters only through b^2, so eta^2 can be substituted directly
            assert g + (g - box_iv.hi) * eta2 - box_iv.lo == 0


class TestRealRootInBox:
    def one(self, gens):
        return [Polynomial.constant(gens, 1)]

    def test_h5(self):
        v = real_root_in_box([Polynomial.var(("h5",), "h5")], self.one(("h5",)),
                             Box.of({"h5": iv("[1,3)")}))
        assert v.inconsistent and v.certificate == "box-pruned"

    def test_linear_pair(self):
        abc = ("a", "b", "c")
        E = [parse_polynomial("a - b", abc), parse_polynomial("c - b", abc)]
        box = Box.of({"a": iv("[1,2]"), "b": iv("[1,4]"), "c": iv("[3,4]")})
        assert real_root_in_box(E, self.one(abc), box).inconsistent

    def test_witness(self):
        ab = ("a", "b")
        E = [parse_polynomial("a + b - 2", ab)]
        box = Box.of({"a": iv("[0,2]"), "b": iv("[0,2]")})
        v = real_root_in_box(E, self.one(ab), box)
        assert v.consistent and v.certificate == "witness-found"
        assert check_witness(E, self.one(ab), box, v.witness)

    def test_no_real_points(self):
        E = [parse_polynomial("a^2 + 1", ("a",))]
        for box_iv in ("[-1,1]", "[0,5)", "(-inf,inf)"):
            v = real_root_in_box(E, self.one(("a",)), Box.of({"a": iv(box_iv)}))
            assert v.inconsistent

    def test_complex_empty(self):
        E = [parse_polynomial("a", ("a",)), parse_polynomial("a - 1", ("a",))]
        v = real_root_in_box(E, self.one(("a",)), Box.of({"a": iv("[-1,1]")}))
        assert v.inconsistent and v.certificate == "complex-empty"

    def test_irrational_witness(self):
        E = [parse_polynomial("a^2 - 2", ("a",))]
        v = real_root_in_box(E, self.one(("a",)), Box.of({"a": iv("[0,2)")}))
        assert v.consistent
        assert abs(float(v.witness["a"]) - 2 ** 0.5) < 1e-9
        assert check_witness(E, self.one(("a",)), Box.of({"a": iv("[0,2)")}), v.witness)

    def test_thin_region(self):
        # feasible only for h1 in [3/16, 1/4), which the coarse candidate grid misses
        hs = ("h1", "h2", "h3")
        E = [parse_polynomial("4*h1 - 2*h2 + h3", hs)]
        N = [Polynomial.var(hs, h) for h in hs]
        box = Box.of({"h1": iv("[-1/2,1/4)"), "h2": iv("[0,1)"), "h3": iv("[-3/2,-3/4]")})
        v = real_root_in_box(E, N, box)
        assert v.consistent and check_witness(E, N, box, v.witness)

    def test_open_endpoint_respected(self):
        E = [parse_polynomial("a - 1", ("a",))]
        assert real_root_in_box(E, self.one(("a",)), Box.of({"a": iv("[0,1)")})).inconsistent
        assert real_root_in_box(E, self.one(("a",)), Box.of({"a": iv("[0,1]")})).consistent


class TestIntervalIsConsistent:
    box5 = parameterize(bilinear_system())[1]
    gens = H

    def P(self, t):
        return parse_polynomial(t, self.gens)

    def test_trivial(self):
        ok, v = interval_is_consistent([], [Polynomial.constant(self.gens, 1)], self.box5)
        assert ok and v.consistent

    def test_h5_rejected(self):
        ok, v = interval_is_consistent([self.P("h5")], [self.P("h1"), self.P("h2"), self.P("h4")],
                                       self.box5)
        assert not ok and v.inconsistent

    def test_radical_filter(self):
        a = Polynomial.var(("a",), "a")
        ok, v = interval_is_consistent([a], [a], Box.of({"a": iv("[-1,1]")}))
        assert not ok and v.certificate == "complex-empty"


class TestIGS:
    def test_degenerate_system(self):
        p = IntervalPolynomial.from_polynomial(parse_polynomial("x^2 - y", XY))
        q = IntervalPolynomial.from_polynomial(parse_polynomial("x*y - 1", XY))
        res = igs(IntervalSystem([p, q], XY), Lex())
        assert len(res) == 1
        assert res.branches[0].G == list(reduced_gb([p.family_member([1, -1]),
                                                     q.family_member([1, -1])], Lex()))

    def test_linear_system(self):
        S, order = load("linear.ipoly")
        res = igs(S, order)
        abc = res.system.parameters
        forbidden = {parse_polynomial(t, abc).primitive() for t in ("h1 - h2", "h3 - h2")}
        for br in res.branches:
            normed = {e.primitive() for e in br.E} | {(-e).primitive() for e in br.E}
            assert not forbidden <= normed
        assert all(not b.unknown for b in res.branches)

    def test_no_inconsistent_survivors(self, igs5):
        assert not any(b.verdict.inconsistent for b in igs5.branches)
        assert all(b.verdict.inconsistent for b in igs5.rejected)
        for b in igs5.rejected:
            assert b.verdict.certificate in ("complex-empty", "box-pruned")

    def test_consistent_witnesses(self, igs5):
        for b in igs5.branches:
            if b.verdict.consistent:
                assert check_witness(b.E, b.N, igs5.box, b.verdict.witness)

    def test_pruning_soundness(self, igs5):
        for b in igs5.rejected:
            assert grid_search(b.E, b.N, igs5.box, F(1, 8)) is None

    def test_pruning_soundness_linear(self):
        S, order = load("linear.ipoly")
        res = igs(S, order)
        for b in res.rejected:
            assert grid_search(b.E, b.N, res.box, F(1, 8)) is None


def _box_points(box, rng, n):
    """Random box points, a share of them placed on the strata of the bilinear system."""
    pts = []
    for k in range(n):
        pt = {name: sample_in(rng, i) for name, i in box.coords}
        mode = k % 4
        if mode == 1:
            pt["h2"] = F(0)
        elif mode == 2:
            pt["h1"] = F(0)
            pt["h4"] = F(0)
        elif mode == 3:
            h4 = pt["h1"] * pt["h5"] / pt["h3"]
            if box["h4"].contains(h4):
                pt["h4"] = h4
        pts.append(pt)
    return pts


def test_cover_specialization_and_finiteness(igs5):
    rng = random.Random(66)
    pts = _box_points(igs5.box, rng, 120)
    P_ = igs5.system.polys
    lm_sets = {tuple(sorted(g.lm(igs5.order)[:2] for g in b.G)) for b in igs5.branches}
    violations = 0
    for pt in pts:
        covering = [b for b in igs5.branches if b.branch.covers(pt)]
        if not covering:
            violations += 1
            continue
        for b in covering:
            if not specialization_ok(P_, b.G, pt, XY, Lex()):
                violations += 1
        sP = [p.evaluate(pt).to_ring(XY) for p in P_]
        observed = tuple(sorted(g.lm(Lex()) for g in reduced_gb([p for p in sP if p], Lex())))
        if observed not in lm_sets:
            violations += 1
    assert len(pts) >= 100
    assert violations == 0
