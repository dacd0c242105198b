"""Comprehensive Groebner systems with the PGB algorithm.

Parametric polynomials are flat :class:`Polynomial` objects over
``variables + parameters``; the block order compares the variable part
first, so the parameter-only elements of a reduced basis form the
elimination ideal.  Null and non-null conditions of emitted branches are
expressed over the parameters alone.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

from .groebner import radical_member, reduced_gb
from .poly import (
    BlockOrder,
    GrevLex,
    MonomialOrder,
    Polynomial,
    PolynomialError,
    mono_divides,
    split_leading,
)

ConsistencyTest = Callable[[list, list], bool]


@dataclass
class Branch:
    """A triple (E, N, G): on V(E) minus V(N), G specializes to a Groebner basis."""

    E: list[Polynomial]
    N: list[Polynomial]
    G: list[Polynomial]

    def is_unit(self) -> bool:
        return len(self.G) == 1 and self.G[0].is_constant()

    def covers(self, point) -> bool:
        """True if every E vanishes and some N does not at ``point``."""
        return all(e(point) == 0 for e in self.E) and any(n(point) != 0 for n in self.N)


@dataclass
class CGSResult:
    branches: list[Branch]
    order: MonomialOrder
    variables: tuple
    parameters: tuple
    xorder: MonomialOrder = field(default=None)

    def __iter__(self):
        return iter(self.branches)

    def __len__(self):
        return len(self.branches)


def is_consistent(E: Sequence[Polynomial], N: Sequence[Polynomial]) -> bool:
    """True iff some g in N lies outside the radical of <E>."""
    E = [e for e in E if e]
    for g in N:
        if not radical_member(g, E):
            return True
    return False


def md_basis(P: Sequence[Polynomial], nvars: int, xorder: MonomialOrder,
             aorder: MonomialOrder | None = None) -> list[Polynomial]:
    """Minimal Dickson basis of a Groebner basis ``P`` with no parameter-only elements.

    Among elements sharing the same ``LM_x`` the one with the smallest
    leading coefficient (compared in ``aorder``) is kept.
    """
    aorder = aorder or GrevLex()
    info = []
    for p in P:
        if not p:
            raise PolynomialError("zero polynomial in MDBasis input")
        xm, lc = split_leading(p, nvars, xorder)
        if not any(xm):
            raise PolynomialError("MDBasis input must not contain parameter-only polynomials")
        lcm_ = lc.lm(aorder)
        info.append((xm, aorder.key(lcm_[nvars:]), len(p.terms)))
    keep = []
    for i, (m, k, size) in enumerate(info):
        dominated = False
        for j, (m2, k2, size2) in enumerate(info):
            if j == i or not mono_divides(m2, m):
                continue
            if m2 != m or (k2, size2, j) < (k, size, i):
                dominated = True
                break
        if not dominated:
            keep.append(P[i])
    return keep


def _param_lcm(polys: Sequence[Polynomial]) -> Polynomial:
    """lcm of parameter polynomials, computed as a generator of the ideal intersection."""
    result = polys[0]
    for h in polys[1:]:
        result = _lcm2(result, h)
    return result


def _lcm2(f: Polynomial, g: Polynomial) -> Polynomial:
    if f.is_constant():
        return g
    if g.is_constant():
        return f
    gens = f.gens
    t = "_t"
    while t in gens:
        t += "_"
    ext = (t,) + gens
    tv = Polynomial.var(ext, t)
    F = [tv * f.to_ring(ext), (1 - tv) * g.to_ring(ext)]
    G = reduced_gb(F, BlockOrder(GrevLex(), 1, GrevLex()))
    cands = [p for p in G if p.degree_in(t) <= 0]
    best = min(cands, key=lambda p: (p.total_degree(), len(p.terms)))
    return best.to_ring(gens)


def _normalize(p: Polynomial) -> Polynomial:
    return p.primitive()


def _product_set(A: Sequence[Polynomial], B: Sequence[Polynomial]) -> list[Polynomial]:
    out: list[Polynomial] = []
    seen = set()
    for a in A:
        for b in B:
            p = a * b
            if p.is_zero():
                continue
            p = _normalize(p)
            if p not in seen:
                seen.add(p)
                out.append(p)
    return out


def _dedupe(ps: Sequence[Polynomial]) -> list[Polynomial]:
    out, seen = [], set()
    for p in ps:
        if p.is_zero():
            continue
        p = _normalize(p)
        if p not in seen:
            seen.add(p)
            out.append(p)
    return out


class _PGB:
    def __init__(self, nvars: int, order: BlockOrder, consistent: ConsistencyTest,
                 parameters: tuple, on_reject=None):
        self.nvars = nvars
        self.order = order
        self.xorder = order.first
        self.consistent = consistent
        self.parameters = parameters
        self.on_reject = on_reject

    def to_params(self, ps):
        return [p.to_ring(self.parameters) for p in _dedupe(ps)]

    def check(self, E, N, G=None) -> bool:
        ok = self.consistent(self.to_params(E), self.to_params(N))
        if not ok and G is not None and self.on_reject is not None:
            self.on_reject(self.emit(E, N, G))
        return ok

    def emit(self, E, N, G) -> Branch:
        return Branch(self.to_params(E), self.to_params(N), list(G))

    def run(self, P, E, N) -> list[Branch]:
        gens = (P or E)[0].gens
        one = Polynomial.constant(gens, 1)
        G = list(reduced_gb(list(P) + list(E), self.order))
        if len(G) == 1 and G[0].is_constant():
            if self.check(E, N, [one]):
                return [self.emit(E, N, [one])]
            return []
        nv = self.nvars
        Gr = [g for g in G if not any(any(m[:nv]) for m in g.terms)]
        rest = [g for g in G if g not in Gr]
        out: list[Branch] = []
        NGr = _product_set(N, Gr)
        if NGr and self.check(E, NGr, [one]):
            out.append(self.emit(E, NGr, [one]))
        if not self.check(Gr, N):
            return out
        Gm = md_basis(rest, nv, self.xorder, self.order.second)
        hs = [_normalize(split_leading(g, nv, self.xorder)[1]) for g in Gm]
        h = _normalize(_param_lcm(hs))
        Nh = _product_set(N, [h])
        if self.check(Gr, Nh, Gm):
            out.append(self.emit(Gr, Nh, Gm))
        prefix = one
        for hi in hs:
            if not hi.is_constant():
                out.extend(self.run(rest, list(Gr) + [hi], _product_set(N, [prefix])))
            prefix = prefix * hi
        return out


def pgb_main(P: Sequence[Polynomial], E: Sequence[Polynomial], N: Sequence[Polynomial],
             order: BlockOrder, parameters: Sequence[str],
             consistent: ConsistencyTest = is_consistent, on_reject=None) -> list[Branch]:
    """Branches of a comprehensive Groebner system of ``<P>`` under conditions (E, N).

    All polynomials live in the ring ``variables + parameters``; ``order``
    is the block order whose first block covers the variables.
    """
    parameters = tuple(parameters)
    P = list(P)
    if not P:
        raise PolynomialError("empty polynomial system")
    gens = P[0].gens
    E = [e.to_ring(gens) for e in E]
    N = [n.to_ring(gens) for n in N]
    runner = _PGB(order.split, order, consistent, parameters, on_reject)
    return runner.run(P, E, N)


def pgb(P: Sequence[Polynomial], variables: Sequence[str], parameters: Sequence[str],
        xorder: MonomialOrder, aorder: MonomialOrder | None = None) -> CGSResult:
    """Comprehensive Groebner system of ``<P>`` with the plain radical-membership test."""
    variables, parameters = tuple(variables), tuple(parameters)
    gens = variables + parameters
    P = [p.to_ring(gens) for p in P]
    aorder = aorder or GrevLex()
    order = BlockOrder(xorder, len(variables), aorder)
    one = Polynomial.constant(gens, 1)
    branches = pgb_main(P, [], [one], order, parameters)
    return CGSResult(branches, order, variables, parameters, xorder)
