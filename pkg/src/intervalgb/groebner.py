"""Buchberger's algorithm over the rationals.

The engine works on raw ``{monomial: Fraction}`` dicts for speed and wraps
results back into :class:`~intervalgb.poly.Polynomial`.  Pairs are chosen by
the normal strategy (smallest lcm degree, then smallest lcm in the order) and
filtered with the Gebauer-Moeller installation of Buchberger's criteria.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .poly import (
    BlockOrder,
    GrevLex,
    MonomialOrder,
    Polynomial,
    PolynomialError,
    mono_div,
    mono_divides,
    mono_lcm,
    mono_mul,
)


def _neg_key(order: MonomialOrder):
    key = order.key

    def nk(m):
        return tuple(-k for k in key(m))

    return nk


class _Basis:
    """Working set of monic polynomials with cached leading terms."""

    def __init__(self, order: MonomialOrder):
        self.order = order
        self.key = order.key
        self.nkey = _neg_key(order)
        self.polys: list[dict] = []
        self.lms: list[tuple] = []

    def add(self, terms: dict) -> int:
        lm = max(terms, key=self.key)
        c = terms[lm]
        if c != 1:
            inv = 1 / c
            terms = {m: v * inv for m, v in terms.items()}
        self.polys.append(terms)
        self.lms.append(lm)
        return len(self.polys) - 1

    def reduce(self, f: dict, active: Sequence[int], tail: bool = True) -> dict:
        """Full (or top-only) reduction of ``f`` by the active basis elements."""
        p = dict(f)
        nkey = self.nkey
        heap = [(nkey(m), m) for m in p]
        heapq.heapify(heap)
        rem: dict = {}
        polys, lms = self.polys, self.lms
        while heap:
            _, m = heapq.heappop(heap)
            c = p.pop(m, None)
            if c is None:
                continue
            for i in active:
                lm = lms[i]
                if mono_divides(lm, m):
                    q = mono_div(m, lm)
                    for gm, gc in polys[i].items():
                        if gm == lm:
                            continue
                        t = mono_mul(gm, q)
                        old = p.get(t)
                        if old is None:
                            p[t] = -c * gc
                            heapq.heappush(heap, (nkey(t), t))
                        else:
                            v = old - c * gc
                            if v:
                                p[t] = v
                            else:
                                del p[t]
                    break
            else:
                rem[m] = c
                if not tail:
                    rem.update(p)
                    return rem
        return rem


def _spoly(b: _Basis, i: int, j: int) -> dict:
    f, g = b.polys[i], b.polys[j]
    lf, lg = b.lms[i], b.lms[j]
    l = mono_lcm(lf, lg)
    qf, qg = mono_div(l, lf), mono_div(l, lg)
    out: dict = {}
    for m, c in f.items():
        out[mono_mul(m, qf)] = c
    for m, c in g.items():
        t = mono_mul(m, qg)
        v = out.get(t, 0) - c
        if v:
            out[t] = v
        else:
            out.pop(t, None)
    return out


def _coprime(a, b) -> bool:
    return all(x == 0 or y == 0 for x, y in zip(a, b))


def _update(b: _Basis, G: list[int], B: list[tuple[int, int]], h: int):
    """Gebauer-Moeller update of the basis indices ``G`` and pair list ``B``."""
    lms = b.lms
    lh = lms[h]
    C = [(h, g) for g in G]
    D: list[tuple[int, int]] = []
    while C:
        _, g1 = pair = C.pop(0)
        l1 = mono_lcm(lh, lms[g1])
        if _coprime(lh, lms[g1]):
            D.append(pair)
            continue
        redundant = False
        for _, g2 in C + D:
            if mono_divides(mono_lcm(lh, lms[g2]), l1):
                redundant = True
                break
        if not redundant:
            D.append(pair)
    E = [(hh, g) for hh, g in D if not _coprime(lh, lms[g])]
    Bnew = []
    for g1, g2 in B:
        l12 = mono_lcm(lms[g1], lms[g2])
        if (mono_divides(lh, l12)
                and mono_lcm(lms[g1], lh) != l12
                and mono_lcm(lh, lms[g2]) != l12):
            continue
        Bnew.append((g1, g2))
    Bnew.extend(E)
    Gnew = [g for g in G if not mono_divides(lh, lms[g])]
    Gnew.append(h)
    return Gnew, Bnew


def _buchberger(F: Iterable[dict], order: MonomialOrder) -> tuple[_Basis, list[int]]:
    b = _Basis(order)
    G: list[int] = []
    B: list[tuple[int, int]] = []
    key = order.key
    inputs = [f for f in F if f]
    inputs.sort(key=lambda f: key(max(f, key=key)))
    for f in inputs:
        r = b.reduce(f, G)
        if not r:
            continue
        h = b.add(r)
        if not any(h_lm for h_lm in b.lms[h]):
            return b, [h]
        G, B = _update(b, G, B, h)

    def pair_rank(p):
        l = mono_lcm(b.lms[p[0]], b.lms[p[1]])
        return (sum(l), key(l))

    while B:
        B.sort(key=pair_rank)
        i, j = B.pop(0)
        s = _spoly(b, i, j)
        if not s:
            continue
        r = b.reduce(s, G)
        if not r:
            continue
        h = b.add(r)
        if not any(b.lms[h]):
            return b, [h]
        G, B = _update(b, G, B, h)
    return b, G


def _interreduce(b: _Basis, G: list[int]) -> list[dict]:
    key = b.key
    lms = b.lms
    # minimal basis: drop elements whose LM is divisible by another's
    G = sorted(set(G), key=lambda i: key(lms[i]))
    minimal: list[int] = []
    for i in G:
        if not any(mono_divides(lms[j], lms[i]) for j in minimal):
            minimal.append(i)
    out = []
    for i in minimal:
        others = [j for j in minimal if j != i]
        lm = lms[i]
        tail = {m: c for m, c in b.polys[i].items() if m != lm}
        red = b.reduce(tail, others) if tail else {}
        red[lm] = Fraction(1)
        out.append(red)
    out.sort(key=lambda t: key(max(t, key=key)), reverse=True)
    return out


@dataclass
class GroebnerBasis:
    """A (reduced) Groebner basis together with the order it was computed for."""

    generators: list[Polynomial]
    order: MonomialOrder
    reduced: bool = True
    gens: tuple = field(default=())

    def __iter__(self):
        return iter(self.generators)

    def __len__(self):
        return len(self.generators)

    def __getitem__(self, i):
        return self.generators[i]

    @property
    def is_unit(self) -> bool:
        return len(self.generators) == 1 and self.generators[0].is_constant()

    def leading_monomials(self) -> list:
        return [g.lm(self.order) for g in self.generators]

    def normal_form(self, f: Polynomial) -> Polynomial:
        return normal_form(f, self.generators, self.order)

    def contains(self, f: Polynomial) -> bool:
        return normal_form(f, self.generators, self.order).is_zero()

    def __str__(self):
        return "{" + ", ".join(g.format(self.order) for g in self.generators) + "}"


def _ring_of(F: Sequence[Polynomial]) -> tuple:
    gens = None
    for f in F:
        if gens is None:
            gens = f.gens
        elif f.gens != gens:
            raise PolynomialError(f"ring mismatch: {gens} vs {f.gens}")
    return gens or ()


def normal_form(f: Polynomial, G: Sequence[Polynomial], order: MonomialOrder) -> Polynomial:
    """Remainder of ``f`` on division by ``G``; no term is divisible by any LM(g)."""
    G = [g for g in G if g]
    if not G:
        return f
    _ring_of([f, *G])
    b = _Basis(order)
    idx = [b.add(dict(g.terms)) for g in G]
    return Polynomial._raw(f.gens, b.reduce(f.terms, idx))


def s_polynomial(f: Polynomial, g: Polynomial, order: MonomialOrder) -> Polynomial:
    """``lcm/LT(f) * f - lcm/LT(g) * g``."""
    (lf, cf), (lg, cg) = f.leading(order), g.leading(order)
    l = mono_lcm(lf, lg)
    return f.mul_term(mono_div(l, lf), 1 / cf) - g.mul_term(mono_div(l, lg), 1 / cg)


def reduced_gb(F: Sequence[Polynomial], order: MonomialOrder) -> GroebnerBasis:
    """The reduced Groebner basis of the ideal generated by ``F``.

    Generators are monic and sorted by descending leading monomial.  The
    unit ideal gives ``[1]``; the zero ideal gives ``[]``.
    """
    gens = _ring_of(F)
    b, G = _buchberger((dict(f.terms) for f in F), order)
    if len(G) == 1 and not any(b.lms[G[0]]):
        return GroebnerBasis([Polynomial.constant(gens, 1)], order, True, gens)
    out = _interreduce(b, G)
    return GroebnerBasis([Polynomial._raw(gens, t) for t in out], order, True, gens)


def eliminate(G: GroebnerBasis, subring: Sequence[str]) -> list[Polynomial]:
    """Generators of ``G`` that involve only the generators in ``subring``.

    ``G`` must have been computed for a block order whose first block holds
    the eliminated generators.
    """
    if not isinstance(G.order, BlockOrder):
        raise PolynomialError("elimination requires a block order")
    keep = set(subring)
    gens = G.gens or (G.generators[0].gens if G.generators else ())
    first = set(gens[: G.order.split])
    if first & keep:
        raise PolynomialError("the eliminated block must not contain subring generators")
    return [g for g in G.generators if set(g.used_vars()) <= keep]


def ideal_member(f: Polynomial, F: Sequence[Polynomial], order: MonomialOrder | None = None) -> bool:
    order = order or GrevLex()
    return reduced_gb(list(F), order).contains(f)


def _fresh(gens: Sequence[str], base: str = "_w") -> str:
    name = base
    k = 0
    while name in gens:
        k += 1
        name = f"{base}{k}"
    return name


def radical_member(g: Polynomial, E: Sequence[Polynomial]) -> bool:
    """Decide ``g in sqrt(<E>)`` by the Rabinowitsch trick."""
    if g.is_zero():
        return True
    gens = g.gens
    w = _fresh(gens)
    ext = gens + (w,)
    gw = g.to_ring(ext)
    F = [e.to_ring(ext) for e in E if e]
    F.append(Polynomial.constant(ext, 1) - Polynomial.var(ext, w) * gw)
    return reduced_gb(F, GrevLex()).is_unit


def is_groebner(G: Sequence[Polynomial], order: MonomialOrder) -> bool:
    """Buchberger's criterion: all S-polynomials reduce to zero."""
    G = [g for g in G if g]
    for i in range(len(G)):
        for j in range(i + 1, len(G)):
            if normal_form(s_polynomial(G[i], G[j], order), G, order):
                return False
    return True
