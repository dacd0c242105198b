"""Applications: univariate interval root sets, divisibility, fuzzy systems."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .groebner import normal_form, reduced_gb
from .igs import (
    Box,
    ConsistencyVerdict,
    IGSResult,
    IntervalSystem,
    ParametricSystem,
    igs,
    igs_parametric,
    real_root_in_box,
)
from .interval import Interval, is_finite
from .poly import (
    GrevLex,
    IntervalPolynomial,
    Lex,
    MonomialOrder,
    Polynomial,
    PolynomialError,
)
from .realroots import (
    RealAlgebraic,
    count_roots,
    evaluate,
    from_polynomial,
    gcd_poly,
    isolate_real_roots,
    mul_poly,
    squarefree,
    strip,
)


# ---------------------------------------------------------------------------
# univariate root sets
# ---------------------------------------------------------------------------

@dataclass
class RootComponent:
    """A connected piece of a root set; ``None`` endpoints are infinite."""

    lo: RealAlgebraic | None
    hi: RealAlgebraic | None
    lo_closed: bool
    hi_closed: bool

    def contains(self, q) -> bool:
        q = Fraction(q)
        if self.lo is not None:
            c = self.lo.compare_rational(q)
            if c > 0 or (c == 0 and not self.lo_closed):
                return False
        if self.hi is not None:
            c = self.hi.compare_rational(q)
            if c < 0 or (c == 0 and not self.hi_closed):
                return False
        return True

    def floats(self) -> tuple[float, float]:
        lo = float("-inf") if self.lo is None else float(self.lo)
        hi = float("inf") if self.hi is None else float(self.hi)
        return lo, hi

    def __str__(self):
        lo, hi = self.floats()
        left = "[" if self.lo_closed else "("
        right = "]" if self.hi_closed else ")"
        return f"{left}{lo:.6g}, {hi:.6g}{right}"


@dataclass
class RootSet:
    parts: list[RootComponent]
    endpoint_polynomials: dict = field(default_factory=dict)

    def contains(self, q) -> bool:
        return any(p.contains(q) for p in self.parts)

    def __len__(self):
        return len(self.parts)

    def __str__(self):
        if not self.parts:
            return "{}"
        return " U ".join(str(p) for p in self.parts)


def _bound_polys(f: IntervalPolynomial, sign: int):
    """f_min, f_max on the region where x has the given sign, with closedness flags."""
    var = f.gens[0]
    fmin: dict = {}
    fmax: dict = {}
    lo_closed = hi_closed = True
    for iv, m in f.terms:
        if not (is_finite(iv.lo) and is_finite(iv.hi)):
            raise PolynomialError("coefficient intervals must have finite endpoints")
        e = m[0]
        positive = sign > 0 or e % 2 == 0
        if positive:
            fmin[e] = fmin.get(e, 0) + iv.lo
            fmax[e] = fmax.get(e, 0) + iv.hi
            lo_closed &= iv.lo_closed
            hi_closed &= iv.hi_closed
        else:
            fmin[e] = fmin.get(e, 0) + iv.hi
            fmax[e] = fmax.get(e, 0) + iv.lo
            lo_closed &= iv.hi_closed
            hi_closed &= iv.lo_closed
    gens = (var,)
    pmin = Polynomial(gens, {(e,): c for e, c in fmin.items()})
    pmax = Polynomial(gens, {(e,): c for e, c in fmax.items()})
    return pmin, pmax, lo_closed, hi_closed


def _sample_between(a: RealAlgebraic | None, b: RealAlgebraic | None, lo_bound, hi_bound) -> Fraction:
    """A rational strictly between two consecutive roots (or region bounds)."""
    if a is None and b is None:
        return Fraction(lo_bound + hi_bound) / 2 if is_finite(lo_bound) and is_finite(hi_bound) else (
            Fraction(lo_bound) + 1 if is_finite(lo_bound) else Fraction(hi_bound) - 1)
    while True:
        u = a.hi if a is not None else (Fraction(lo_bound) if is_finite(lo_bound) else None)
        v = b.lo if b is not None else (Fraction(hi_bound) if is_finite(hi_bound) else None)
        if u is None:
            return v - 1
        if v is None:
            return u + 1
        if u < v:
            return (u + v) / 2
        for r in (a, b):
            if r is not None and not r.is_exact:
                r.refine((r.hi - r.lo) / 2)


def _accept(s_min: int, s_max: int, lo_closed: bool, hi_closed: bool) -> bool:
    return ((s_min < 0 or (s_min == 0 and lo_closed))
            and (s_max > 0 or (s_max == 0 and hi_closed)))


def _region_pieces(f: IntervalPolynomial, sign: int):
    """Ordered (kind, left, right, accepted) pieces of the open half-line of the given sign."""
    pmin, pmax, lo_closed, hi_closed = _bound_polys(f, sign)
    var = f.gens[0]
    umin, umax = from_polynomial(pmin, var), from_polynomial(pmax, var)
    parts = [squarefree(u) for u in (umin, umax) if len(strip(u)) > 1]
    prod = [Fraction(1)]
    for u in parts:
        prod = mul_poly(prod, u)
    lo, hi = (Fraction(0), float("inf")) if sign > 0 else (float("-inf"), Fraction(0))
    roots = isolate_real_roots(prod, lo, hi) if len(prod) > 1 else []
    gmin = gcd_poly(prod, umin) if umin else []
    gmax = gcd_poly(prod, umax) if umax else []

    def sgn_at_root(r: RealAlgebraic, u, g):
        if not strip(u):
            return 0
        if len(g) > 1 and _root_of(g, r):
            return 0
        return r.sign_of(u)

    def sgn_at(q: Fraction, u):
        v = evaluate(strip(u), q) if strip(u) else 0
        return (v > 0) - (v < 0)

    pieces = []
    bounds = [None] + roots + [None]
    for i in range(len(bounds) - 1):
        a, b = bounds[i], bounds[i + 1]
        q = _sample_between(a, b, lo, hi)
        ok = _accept(sgn_at(q, umin), sgn_at(q, umax), lo_closed, hi_closed)
        pieces.append(("cell", a, b, ok))
        if b is not None:
            ok = _accept(sgn_at_root(b, umin, gmin), sgn_at_root(b, umax, gmax), lo_closed, hi_closed)
            pieces.append(("point", b, b, ok))
    return pieces, (pmin, pmax)


def _root_of(g, r: RealAlgebraic) -> bool:
    if r.is_exact:
        return evaluate(g, r.lo) == 0
    return count_roots(squarefree(g), r.lo, r.hi) > 0


def solve_univariate(f: IntervalPolynomial) -> RootSet:
    """All real x admitting a family member of ``f`` that vanishes at x."""
    if isinstance(f, Polynomial):
        f = IntervalPolynomial.from_polynomial(f)
    if len(f.gens) != 1:
        raise PolynomialError("solve_univariate needs a univariate interval polynomial")
    neg, neg_polys = _region_pieces(f, -1)
    pos, pos_polys = _region_pieces(f, 1)
    const = [iv for iv, m in f.terms if m[0] == 0]
    zero_ok = const[0].contains(0) if const else True
    zero = RealAlgebraic.rational(0)
    # region boundaries: cells touching 0 end at the exact point 0
    pieces = [(k, a, zero if (k == "cell" and b is None) else b, ok) for k, a, b, ok in neg]
    pieces.append(("point", zero, zero, zero_ok))
    pieces += [(k, zero if (k == "cell" and a is None) else a, b, ok) for k, a, b, ok in pos]

    parts: list[RootComponent] = []
    run = None
    for kind, a, b, ok in pieces:
        if ok:
            if run is None:
                run = [a, b, kind == "point", kind == "point"]
            else:
                run[1] = b
                run[3] = kind == "point"
        elif run is not None:
            parts.append(RootComponent(*run))
            run = None
    if run is not None:
        parts.append(RootComponent(*run))
    return RootSet(parts, {"negative": neg_polys, "positive": pos_polys})


# ---------------------------------------------------------------------------
# divisibility
# ---------------------------------------------------------------------------

@dataclass
class DivisibilityReport:
    verdict: bool
    condition: list = field(default_factory=list)
    witness: dict | None = None
    witness_polynomial: Polynomial | None = None
    result: IGSResult | None = None
    note: str = ""


def _coefficient_polys(system: ParametricSystem, index: int) -> list[Polynomial]:
    """Coefficients (over the parameters) of the ``index``-th parametric polynomial."""
    p = system.polys[index]
    nv = len(system.variables)
    coeffs: dict = {}
    for m, c in p.terms.items():
        key = m[:nv]
        coeffs.setdefault(key, {})
        coeffs[key][m[nv:]] = c
    return [Polynomial(system.parameters, d) for d in coeffs.values()]


def i_divides(g: Polynomial, f: IntervalPolynomial, order: MonomialOrder | None = None,
              aorder: MonomialOrder | None = None, depth: int = 24) -> DivisibilityReport:
    """Decide whether some nonzero family member of ``f`` is divisible by ``g``."""
    if g.is_zero():
        raise PolynomialError("divisor must be nonzero")
    order = order or Lex()
    g = g.to_ring(f.gens)
    S = IntervalSystem([f, IntervalPolynomial.from_polynomial(g, order)], f.gens)
    res = igs(S, order, aorder, depth)
    target = g.monic(order)
    sys, box = res.system, res.box
    coeffs = _coefficient_polys(sys, 0)
    unknown = False
    for br in res.branches:
        G = [p.to_ring(sys.gens) for p in br.G]
        if len(G) != 1 or set(G[0].used_vars()) & set(sys.parameters):
            continue
        if G[0].monic(res.order) != target.to_ring(sys.gens).monic(res.order):
            continue
        N = [n * c for n in br.N for c in coeffs if not (n * c).is_zero()]
        if not N:
            continue
        verdict = real_root_in_box(br.E, N, box, depth)
        if not verdict.consistent:
            unknown |= verdict.unknown
            continue
        w = verdict.witness
        choice = []
        names = iter(box.names)
        for iv, _ in f.terms:
            choice.append(iv.lo if iv.is_degenerate else w[next(names)])
        p = f.family_member(choice)
        return DivisibilityReport(True, list(br.E), w, p, res)
    note = "undecided branches remain" if unknown else ""
    return DivisibilityReport(False, [], None, None, res, note)


def widen(f: Polynomial, eps) -> IntervalPolynomial:
    """Replace each coefficient c of ``f`` by ``[c-eps, c+eps]``."""
    eps = Fraction(eps)
    return IntervalPolynomial(f.gens, [(Interval(c - eps, c + eps), m) for m, c in f.sorted_terms()])


@dataclass
class EpsilonResult:
    eps: Fraction | None
    report: DivisibilityReport
    tried: list = field(default_factory=list)

    @property
    def success(self) -> bool:
        return self.eps is not None


def epsilon_divides(f: Polynomial, g: Polynomial, schedule: Sequence,
                    order: MonomialOrder | None = None) -> EpsilonResult:
    """Smallest scheduled eps for which ``g`` i-divides the eps-widening of ``f``."""
    order = order or Lex()
    schedule = [Fraction(e) for e in schedule]
    if not schedule:
        raise ValueError("empty epsilon schedule")
    g = g.to_ring(f.gens)
    if not f.is_zero() and normal_form(f, [g], order).is_zero():
        rep = DivisibilityReport(True, [], {}, f, None, "already divisible")
        return EpsilonResult(schedule[0], rep, [schedule[0]])
    tried = []
    report = None
    for eps in schedule:
        tried.append(eps)
        report = i_divides(g, widen(f, eps), order)
        if report.verdict:
            return EpsilonResult(eps, report, tried)
    return EpsilonResult(None, report, tried)


# ---------------------------------------------------------------------------
# fuzzy systems
# ---------------------------------------------------------------------------

@dataclass
class FuzzyReport:
    result: IGSResult
    core: Interval
    endpoint: Fraction | None
    endpoint_verdict: ConsistencyVerdict | None
    consistency: ConsistencyVerdict | None

    @property
    def endpoint_solvable(self) -> bool | None:
        if self.endpoint_verdict is None or self.endpoint_verdict.unknown:
            return None
        return self.endpoint_verdict.consistent


def _variable_box(variables, signs: Mapping[str, Interval] | None) -> dict:
    signs = signs or {}
    return {v: signs.get(v, Interval.whole()) for v in variables}


def fuzzy_solve(polys: Sequence[Polynomial], variables: Sequence[str], h: str, h_box: Interval,
                xorder: MonomialOrder | None = None, signs: Mapping[str, Interval] | None = None,
                use_signs: bool = True, depth: int = 24) -> FuzzyReport:
    """Interval Groebner system of a fuzzy-parametric system in the single parameter ``h``.

    The system is solved over the half-open core of ``h_box``; a closed
    right endpoint is then specialized and checked separately.  With
    ``use_signs`` the variable sign constraints in ``signs`` restrict real
    solutions in the endpoint check and in the overall consistency verdict.
    """
    xorder = xorder or Lex()
    variables = tuple(variables)
    gens = variables + (h,)
    P = [p.to_ring(gens) for p in polys]
    endpoint = None
    core = h_box
    if h_box.hi_closed and not h_box.is_degenerate:
        endpoint = h_box.hi
        core = Interval(h_box.lo, h_box.hi, h_box.lo_closed, False)
    result = igs_parametric(ParametricSystem(P, variables, (h,)), Box.of({h: core}), xorder,
                            GrevLex(), depth)
    vbox = _variable_box(variables, signs if use_signs else None)
    endpoint_verdict = None
    if endpoint is not None:
        spec = [p.evaluate({h: endpoint}).to_ring(variables) for p in P]
        spec = [p for p in spec if not p.is_zero()]
        one = Polynomial.constant(variables, 1)
        endpoint_verdict = real_root_in_box(spec, [one], Box.of(vbox), depth)
    consistency = None
    if use_signs:
        full = dict(vbox)
        full[h] = h_box
        consistency = real_root_in_box(P, [Polynomial.constant(gens, 1)], Box.of(full), depth)
    return FuzzyReport(result, core, endpoint, endpoint_verdict, consistency)
