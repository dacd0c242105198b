"""Exact real root isolation for univariate rational polynomials.

Dense coefficient lists are used throughout (index = degree).  Roots are
isolated with Sturm sequences and bisection, and represented as
:class:`RealAlgebraic` numbers that can be refined to any width.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

from .interval import INF, NEG_INF, Interval, is_finite
from .poly import Polynomial, PolynomialError

UPoly = list  # list[Fraction], low degree first


def strip(p: Sequence) -> UPoly:
    p = [Fraction(c) for c in p]
    while p and p[-1] == 0:
        p.pop()
    return p


def from_polynomial(f: Polynomial, var: str | None = None) -> UPoly:
    """Dense coefficients of a polynomial that involves at most one generator."""
    used = f.used_vars()
    if len(used) > 1 or (var is not None and used and used[0] != var):
        raise PolynomialError(f"{f} is not univariate")
    i = f.gens.index(var if var is not None else (used[0] if used else f.gens[0])) if f.gens else 0
    deg = max((m[i] for m in f.terms), default=-1)
    out = [Fraction(0)] * (deg + 1)
    for m, c in f.terms.items():
        out[m[i]] += c
    return strip(out)


def to_polynomial(p: Sequence, gens: Sequence[str], var: str) -> Polynomial:
    gens = tuple(gens)
    i = gens.index(var)
    terms = {}
    for e, c in enumerate(p):
        if c:
            m = [0] * len(gens)
            m[i] = e
            terms[tuple(m)] = c
    return Polynomial(gens, terms)


def degree(p: UPoly) -> int:
    return len(p) - 1


def evaluate(p: UPoly, x) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def derivative(p: UPoly) -> UPoly:
    return strip([i * c for i, c in enumerate(p)][1:])


def divmod_poly(a: UPoly, b: UPoly) -> tuple[UPoly, UPoly]:
    a, b = strip(a), strip(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    lb = b[-1]
    while len(r) >= len(b) and r:
        k = len(r) - len(b)
        c = r[-1] / lb
        q[k] = c
        for i, bc in enumerate(b):
            r[k + i] -= c * bc
        r = strip(r)
    return strip(q), r


def rem(a: UPoly, b: UPoly) -> UPoly:
    return divmod_poly(a, b)[1]


def monic(p: UPoly) -> UPoly:
    p = strip(p)
    if not p:
        return p
    lc = p[-1]
    return [c / lc for c in p]


def gcd_poly(a: UPoly, b: UPoly) -> UPoly:
    a, b = strip(a), strip(b)
    while b:
        a, b = b, rem(a, b)
    return monic(a)


def mul_poly(a: UPoly, b: UPoly) -> UPoly:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return strip(out)


def squarefree(p: UPoly) -> UPoly:
    p = strip(p)
    if len(p) <= 2:
        return monic(p)
    g = gcd_poly(p, derivative(p))
    q, r = divmod_poly(p, g)
    return monic(q)


def sturm_sequence(p: UPoly) -> list[UPoly]:
    """Sturm sequence ``p, p', -rem(p, p'), ...`` of the square-free part of ``p``."""
    p = squarefree(p)
    if not p:
        return []
    seq = [p, derivative(p)]
    while seq[-1]:
        r = rem(seq[-2], seq[-1])
        seq.append([-c for c in r])
    return [s for s in seq if s]


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _sign_at(p: UPoly, x) -> int:
    if x == INF:
        return _sign(p[-1])
    if x == NEG_INF:
        return _sign(p[-1]) * (1 if (len(p) - 1) % 2 == 0 else -1)
    return _sign(evaluate(p, x))


def _variations(seq: list[UPoly], x) -> int:
    signs = [s for s in (_sign_at(p, x) for p in seq) if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_roots(p: UPoly, lo=NEG_INF, hi=INF, seq: list[UPoly] | None = None) -> int:
    """Number of distinct real roots in the half-open interval ``(lo, hi]``."""
    seq = seq if seq is not None else sturm_sequence(p)
    if not seq or len(seq[0]) <= 1:
        return 0
    return _variations(seq, lo) - _variations(seq, hi)


def root_bound(p: UPoly) -> Fraction:
    """Cauchy bound: every root satisfies ``|x| < bound``."""
    p = strip(p)
    lc = abs(p[-1])
    return 1 + max((abs(c) / lc for c in p[:-1]), default=Fraction(0))


class RealAlgebraic:
    """A real root of a square-free polynomial, isolated in ``(lo, hi)`` or exact."""

    __slots__ = ("poly", "lo", "hi", "_seq")

    def __init__(self, poly: UPoly, lo: Fraction, hi: Fraction, seq=None):
        self.poly = poly
        self.lo = Fraction(lo)
        self.hi = Fraction(hi)
        self._seq = seq

    @classmethod
    def rational(cls, q) -> "RealAlgebraic":
        q = Fraction(q)
        return cls([-q, Fraction(1)], q, q)

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    def refine(self, width=Fraction(1, 10 ** 12)) -> "RealAlgebraic":
        width = Fraction(width)
        p = self.poly
        while self.hi - self.lo >= width and not self.is_exact:
            mid = (self.lo + self.hi) / 2
            v = evaluate(p, mid)
            if v == 0:
                self.lo = self.hi = mid
                break
            if _sign(evaluate(p, self.lo)) == _sign(v):
                self.lo = mid
            else:
                self.hi = mid
        return self

    def as_rational(self) -> Fraction | None:
        """The exact value if the root is rational, else ``None``."""
        if self.is_exact:
            return self.lo
        for q in _rational_roots(self.poly):
            if self.lo < q < self.hi:
                self.lo = self.hi = q
                return q
        return None

    def __float__(self):
        if self.is_exact:
            return float(self.lo)
        self.refine(Fraction(1, 10 ** 17))
        return float((self.lo + self.hi) / 2)

    def enclosure(self) -> tuple[Fraction, Fraction]:
        return self.lo, self.hi

    def sign_of(self, q: UPoly) -> int:
        """Sign of ``q`` at this root."""
        q = strip(q)
        if not q:
            return 0
        if self.is_exact:
            return _sign(evaluate(q, self.lo))
        g = gcd_poly(self.poly, q)
        if len(g) > 1 and count_roots(g, self.lo, self.hi) > 0:
            return 0
        seq = sturm_sequence(q)
        while count_roots(q, self.lo, self.hi, seq) > 0 or evaluate(q, self.hi) == 0:
            self.refine((self.hi - self.lo) / 2)
            if self.is_exact:
                return _sign(evaluate(q, self.lo))
        return _sign(evaluate(q, self.hi))

    def compare_rational(self, q) -> int:
        """Sign of ``self - q``."""
        q = Fraction(q)
        while self.lo < q < self.hi:
            if evaluate(self.poly, q) == 0:
                self.lo = self.hi = q
                return 0
            self.refine((self.hi - self.lo) / 2)
        if self.is_exact:
            return _sign(self.lo - q)
        return 1 if q <= self.lo else -1

    def __repr__(self):
        if self.is_exact:
            return f"RealAlgebraic({self.lo})"
        return f"RealAlgebraic(~{float(self):.12g})"


def _nudge(q: UPoly, seq, x: Fraction, direction: int, span: Fraction) -> Fraction:
    """A point ``y = x + direction*eps`` with no root of ``q`` strictly between x and y, nor at y."""
    eps = span
    while True:
        y = x + direction * eps
        if evaluate(q, y) != 0:
            if direction > 0:
                inside = count_roots(q, x, y, seq)
            else:
                inside = count_roots(q, y, x, seq) - (1 if evaluate(q, x) == 0 else 0)
            if inside == 0:
                return y
        eps /= 2


def isolate_real_roots(p: UPoly, lo=NEG_INF, hi=INF,
                       lo_closed: bool = False, hi_closed: bool = False) -> list[RealAlgebraic]:
    """Distinct real roots of ``p`` in the given interval, in increasing order."""
    q = squarefree(p)
    if len(q) <= 1:
        return []
    seq = sturm_sequence(q)
    B = root_bound(q)
    a = max(Fraction(lo), -B) if is_finite(lo) else -B
    b = min(Fraction(hi), B) if is_finite(hi) else B
    if a > b:
        return []
    if a == b:
        if evaluate(q, a) == 0 and (lo_closed or a != lo) and (hi_closed or b != hi):
            return [RealAlgebraic(q, a, a, seq)]
        return []
    head, tail = [], []
    if evaluate(q, a) == 0:
        if lo_closed:
            head.append(RealAlgebraic(q, a, a, seq))
        a = _nudge(q, seq, a, 1, (b - a) / 2)
    if evaluate(q, b) == 0:
        if hi_closed:
            tail.append(RealAlgebraic(q, b, b, seq))
        b = _nudge(q, seq, b, -1, (b - a) / 2)
    found: list[RealAlgebraic] = []
    stack = [(a, b)] if a < b else []
    while stack:
        x, y = stack.pop()
        n = count_roots(q, x, y, seq)
        if n == 0:
            continue
        if n == 1:
            found.append(RealAlgebraic(q, x, y, seq))
            continue
        mid = (x + y) / 2
        if evaluate(q, mid) == 0:
            found.append(RealAlgebraic(q, mid, mid, seq))
            left = _nudge(q, seq, mid, -1, (mid - x) / 2)
            right = _nudge(q, seq, mid, 1, (y - mid) / 2)
            stack.append((x, left))
            stack.append((right, y))
        else:
            stack.append((x, mid))
            stack.append((mid, y))
    found.sort(key=lambda r: r.lo)
    return head + found + tail


def _divisors(n: int, limit: int = 10 ** 12) -> list[int] | None:
    n = abs(n)
    if n == 0:
        return [1]
    if n > limit:
        return None
    small, large = [], []
    i = 1
    while i * i <= n:
        if n % i == 0:
            small.append(i)
            if i * i != n:
                large.append(n // i)
        i += 1
    return small + large[::-1]


def _integer_coeffs(p: UPoly) -> list[int]:
    den = math.lcm(*(c.denominator for c in p)) if p else 1
    ints = [int(c * den) for c in p]
    g = 0
    for c in ints:
        g = math.gcd(g, c)
    return [c // g for c in ints] if g else ints


def _rational_roots(p: UPoly) -> list[Fraction]:
    p = strip(p)
    if len(p) <= 1:
        return []
    out = []
    k = 0
    while k < len(p) and p[k] == 0:
        k += 1
    if k:
        out.append(Fraction(0))
        p = p[k:]
    if len(p) <= 1:
        return out
    ints = _integer_coeffs(p)
    nums = _divisors(ints[0])
    dens = _divisors(ints[-1])
    if nums is None or dens is None or len(nums) * len(dens) > 200000:
        return out
    seen = set()
    for d in dens:
        for n in nums:
            for s in (1, -1):
                q = Fraction(s * n, d)
                if q not in seen:
                    seen.add(q)
                    if evaluate(p, q) == 0:
                        out.append(q)
    return sorted(out)


def rational_roots(p: UPoly, interval: Interval | None = None) -> list[Fraction]:
    """Rational roots of ``p`` (optionally restricted to ``interval``)."""
    roots = _rational_roots(p)
    if interval is not None:
        roots = [r for r in roots if interval.contains(r)]
    return roots


def has_root_in(p: UPoly, interval: Interval) -> bool:
    """Whether ``p`` has a real root in ``interval`` (respecting open ends)."""
    q = squarefree(p)
    if not q:
        return True
    if len(q) == 1:
        return False
    seq = sturm_sequence(q)
    lo, hi = interval.lo, interval.hi
    if interval.is_degenerate:
        return evaluate(q, lo) == 0
    n = count_roots(q, lo, hi, seq)
    if is_finite(hi) and evaluate(q, hi) == 0 and not interval.hi_closed:
        n -= 1
    if is_finite(lo) and interval.lo_closed and evaluate(q, lo) == 0:
        n += 1
    return n > 0
