"""Sparse multivariate polynomials over the rationals.

A :class:`Polynomial` lives in a ring given by an ordered tuple of
generator names; terms are stored in a dict from exponent tuples to
nonzero :class:`~fractions.Fraction` coefficients.  Parametric
polynomials are ordinary polynomials over ``variables + parameters``
viewed through :class:`ParamPolynomial`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Mapping, Sequence

from .interval import Interval

Monomial = tuple  # tuple[int, ...]


class PolynomialError(ValueError):
    pass


# ---------------------------------------------------------------------------
# monomials and orders
# ---------------------------------------------------------------------------

def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_div(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


def mono_divides(a: Monomial, b: Monomial) -> bool:
    """True if ``a`` divides ``b``."""
    return all(x <= y for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def mono_degree(a: Monomial) -> int:
    return sum(a)


class MonomialOrder:
    """Base class; subclasses map a monomial to a sort key (bigger key = bigger monomial)."""

    name = "order"

    def key(self, m: Monomial) -> tuple:
        raise NotImplementedError

    def cmp(self, m1: Monomial, m2: Monomial) -> int:
        if len(m1) != len(m2):
            raise PolynomialError("monomials from different rings")
        k1, k2 = self.key(m1), self.key(m2)
        return (k1 > k2) - (k1 < k2)


@dataclass(frozen=True)
class Lex(MonomialOrder):
    """Pure lexicographic order; the first generator is the largest."""

    name = "lex"

    def key(self, m):
        return m

    def __str__(self):
        return "lex"


@dataclass(frozen=True)
class GrevLex(MonomialOrder):
    """Graded reverse lexicographic order; the first generator is the largest."""

    name = "grevlex"

    def key(self, m):
        return (sum(m),) + tuple(-e for e in reversed(m))

    def __str__(self):
        return "grevlex"


@dataclass(frozen=True)
class BlockOrder(MonomialOrder):
    """Compare the first ``split`` exponents by ``first``, break ties by ``second``."""

    first: MonomialOrder
    split: int
    second: MonomialOrder

    name = "block"

    def key(self, m):
        return self.first.key(m[: self.split]) + self.second.key(m[self.split:])

    def __str__(self):
        return f"block({self.first},{self.split},{self.second})"


ORDERS = {"lex": Lex, "grevlex": GrevLex}


def make_order(name: str) -> MonomialOrder:
    try:
        return ORDERS[name]()
    except KeyError:
        raise PolynomialError(f"unknown monomial order {name!r}") from None


def cmp_monomials(order: MonomialOrder, m1: Monomial, m2: Monomial) -> int:
    """-1, 0 or 1 as ``m1`` is less than, equal to or greater than ``m2``."""
    return order.cmp(m1, m2)


# ---------------------------------------------------------------------------
# polynomials
# ---------------------------------------------------------------------------

def _coerce(c) -> Fraction:
    return c if isinstance(c, Fraction) else Fraction(c)


class Polynomial:
    """Immutable sparse polynomial with rational coefficients."""

    __slots__ = ("gens", "terms", "_hash")

    def __init__(self, gens: Sequence[str], terms: Mapping[Monomial, object] | None = None):
        self.gens = tuple(gens)
        n = len(self.gens)
        clean = {}
        if terms:
            for m, c in terms.items():
                if len(m) != n:
                    raise PolynomialError(f"monomial {m} does not match ring {self.gens}")
                c = _coerce(c)
                if c:
                    clean[tuple(m)] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, gens, terms):
        p = object.__new__(cls)
        p.gens = gens
        p.terms = terms
        p._hash = None
        return p

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, gens) -> "Polynomial":
        return cls(gens)

    @classmethod
    def constant(cls, gens, c) -> "Polynomial":
        return cls(gens, {(0,) * len(gens): c})

    @classmethod
    def var(cls, gens, name: str) -> "Polynomial":
        gens = tuple(gens)
        try:
            i = gens.index(name)
        except ValueError:
            raise PolynomialError(f"{name!r} is not a generator of {gens}") from None
        m = [0] * len(gens)
        m[i] = 1
        return cls(gens, {tuple(m): 1})

    @classmethod
    def monomial(cls, gens, m: Monomial, c=1) -> "Polynomial":
        return cls(gens, {tuple(m): c})

    # -- basic queries ------------------------------------------------------

    @property
    def nvars(self) -> int:
        return len(self.gens)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_value(self) -> Fraction:
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def total_degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def degree_in(self, name: str) -> int:
        i = self.gens.index(name)
        return max((m[i] for m in self.terms), default=-1)

    def used_vars(self) -> tuple[str, ...]:
        used = [False] * self.nvars
        for m in self.terms:
            for i, e in enumerate(m):
                if e:
                    used[i] = True
        return tuple(g for g, u in zip(self.gens, used) if u)

    def leading(self, order: MonomialOrder) -> tuple[Monomial, Fraction]:
        """Leading monomial and coefficient w.r.t. ``order``."""
        if not self.terms:
            raise PolynomialError("zero polynomial has no leading term")
        m = max(self.terms, key=order.key)
        return m, self.terms[m]

    def lm(self, order) -> Monomial:
        return self.leading(order)[0]

    def lc(self, order) -> Fraction:
        return self.leading(order)[1]

    def sorted_terms(self, order: MonomialOrder | None = None):
        order = order or Lex()
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    # -- arithmetic ---------------------------------------------------------

    def _check(self, other: "Polynomial"):
        if other.gens != self.gens:
            raise PolynomialError(f"ring mismatch: {self.gens} vs {other.gens}")

    def _lift(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        return Polynomial.constant(self.gens, other)

    def __add__(self, other):
        other = self._lift(other)
        t = dict(self.terms)
        for m, c in other.terms.items():
            v = t.get(m, 0) + c
            if v:
                t[m] = v
            else:
                t.pop(m, None)
        return Polynomial._raw(self.gens, t)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.gens, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            c = _coerce(other)
            if not c:
                return Polynomial._raw(self.gens, {})
            return Polynomial._raw(self.gens, {m: v * c for m, v in self.terms.items()})
        self._check(other)
        t: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                v = t.get(m, 0) + c1 * c2
                if v:
                    t[m] = v
                else:
                    t.pop(m, None)
        return Polynomial._raw(self.gens, t)

    __rmul__ = __mul__

    def __truediv__(self, c):
        c = _coerce(c)
        return self * (1 / c)

    def __pow__(self, n: int):
        if n < 0:
            raise PolynomialError("negative power")
        result = Polynomial.constant(self.gens, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def mul_term(self, m: Monomial, c) -> "Polynomial":
        return Polynomial._raw(self.gens, {mono_mul(k, m): v * c for k, v in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.gens == other.gens and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.gens, frozenset(self.terms.items())))
        return self._hash

    # -- normalization ------------------------------------------------------

    def monic(self, order: MonomialOrder) -> "Polynomial":
        if not self.terms:
            return self
        return self * (1 / self.lc(order))

    def primitive(self, order: MonomialOrder | None = None) -> "Polynomial":
        """Scale to integer coefficients with gcd 1 and positive leading coefficient."""
        if not self.terms:
            return self
        den = lcm(*(c.denominator for c in self.terms.values()))
        num = 0
        for c in self.terms.values():
            num = gcd(num, c.numerator)
        scale = Fraction(den, num)
        if self.lc(order or GrevLex()) < 0:
            scale = -scale
        return self * scale

    # -- substitution and ring changes -------------------------------------

    def evaluate(self, point: Mapping[str, object]) -> "Polynomial":
        """Substitute rational values for some generators; result keeps the same ring."""
        idx = [(i, _coerce(point[g])) for i, g in enumerate(self.gens) if g in point]
        if not idx:
            return self
        t: dict = {}
        for m, c in self.terms.items():
            m2 = list(m)
            for i, v in idx:
                e = m2[i]
                if e:
                    c = c * v ** e
                    m2[i] = 0
            if c:
                m2 = tuple(m2)
                v = t.get(m2, 0) + c
                if v:
                    t[m2] = v
                else:
                    t.pop(m2, None)
        return Polynomial._raw(self.gens, t)

    def __call__(self, *values) -> Fraction:
        """Evaluate at a full point given positionally."""
        if len(values) == 1 and isinstance(values[0], Mapping):
            p = values[0]
            values = [p[g] for g in self.gens]
        if len(values) != self.nvars:
            raise PolynomialError("wrong number of values")
        vals = [_coerce(v) for v in values]
        total = Fraction(0)
        for m, c in self.terms.items():
            for v, e in zip(vals, m):
                if e:
                    c = c * v ** e
            total += c
        return total

    def to_ring(self, gens: Sequence[str]) -> "Polynomial":
        """Re-express in a ring with generators ``gens`` (must cover all used generators)."""
        gens = tuple(gens)
        if gens == self.gens:
            return self
        pos = {g: i for i, g in enumerate(gens)}
        mapping = []
        for i, g in enumerate(self.gens):
            mapping.append(pos.get(g))
        t = {}
        n = len(gens)
        for m, c in self.terms.items():
            m2 = [0] * n
            for i, e in enumerate(m):
                if e:
                    j = mapping[i]
                    if j is None:
                        raise PolynomialError(f"generator {self.gens[i]!r} not in target ring {gens}")
                    m2[j] = e
            t[tuple(m2)] = c
        return Polynomial._raw(gens, t)

    def substitute(self, name: str, value: "Polynomial") -> "Polynomial":
        """Replace generator ``name`` by the polynomial ``value`` (same ring)."""
        self._check(value)
        i = self.gens.index(name)
        out = Polynomial.zero(self.gens)
        cache = {0: Polynomial.constant(self.gens, 1)}
        for m, c in self.terms.items():
            e = m[i]
            if e not in cache:
                cache[e] = value ** e
            rest = m[:i] + (0,) + m[i + 1:]
            out = out + cache[e].mul_term(rest, c)
        return out

    # -- printing -----------------------------------------------------------

    def format(self, order: MonomialOrder | None = None) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms(order):
            mono = "*".join(
                g if e == 1 else f"{g}^{e}" for g, e in zip(self.gens, m) if e
            )
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"Polynomial({self.format()!r}, gens={self.gens})"


# ---------------------------------------------------------------------------
# parametric polynomials
# ---------------------------------------------------------------------------

def split_leading(f: Polynomial, nvars: int, xorder: MonomialOrder) -> tuple[Monomial, Polynomial]:
    """``(LM_x(f), LC_x(f))`` for ``f`` over ``variables + parameters``.

    The first ``nvars`` generators are the main variables; the coefficient
    is returned as a polynomial in the same (full) ring with no variable part.
    """
    if not f.terms:
        raise PolynomialError("zero polynomial has no leading term")
    xm = max((m[:nvars] for m in f.terms), key=xorder.key)
    pad = (0,) * nvars
    coeff = {pad + m[nvars:]: c for m, c in f.terms.items() if m[:nvars] == xm}
    return xm, Polynomial._raw(f.gens, coeff)


@dataclass(frozen=True)
class ParamPolynomial:
    """A polynomial in ``variables`` whose coefficients are polynomials in ``parameters``."""

    poly: Polynomial
    variables: tuple
    parameters: tuple

    def __post_init__(self):
        if set(self.variables) & set(self.parameters):
            raise PolynomialError("variables and parameters must be disjoint")
        object.__setattr__(self, "poly", self.poly.to_ring(tuple(self.variables) + tuple(self.parameters)))

    @classmethod
    def from_poly(cls, poly: Polynomial, variables, parameters):
        return cls(poly, tuple(variables), tuple(parameters))

    def coefficients(self) -> dict:
        """Map from x-monomial to coefficient polynomial over the parameters."""
        n = len(self.variables)
        out: dict = {}
        for m, c in self.poly.terms.items():
            out.setdefault(m[:n], {})[m[n:]] = c
        return {xm: Polynomial(self.parameters, t) for xm, t in out.items()}

    def leading(self, xorder: MonomialOrder) -> tuple[Monomial, Polynomial]:
        xm, lc = split_leading(self.poly, len(self.variables), xorder)
        return xm, lc.to_ring(self.parameters)

    def evaluate(self, point: Mapping[str, object]) -> Polynomial:
        missing = [a for a in self.parameters if a not in point]
        if missing:
            raise PolynomialError(f"no value for parameters {missing}")
        return self.poly.evaluate(point).to_ring(self.variables)

    def __str__(self):
        return self.poly.format()


def leading(f, order: MonomialOrder):
    """Leading (monomial, coefficient) of a Polynomial, or (LM_x, LC_x) of a ParamPolynomial."""
    if isinstance(f, ParamPolynomial):
        return f.leading(order)
    return f.leading(order)


def evaluate(f, point: Mapping[str, object]) -> Polynomial:
    if isinstance(f, ParamPolynomial):
        return f.evaluate(point)
    return f.evaluate(point)


# ---------------------------------------------------------------------------
# interval polynomials
# ---------------------------------------------------------------------------

class IntervalPolynomial:
    """Formal sum of interval coefficients times monomials."""

    def __init__(self, gens: Sequence[str], terms: Iterable[tuple[Interval, Monomial]]):
        self.gens = tuple(gens)
        merged: dict = {}
        order: list = []
        for iv, m in terms:
            m = tuple(m)
            if len(m) != len(self.gens):
                raise PolynomialError(f"monomial {m} does not match ring {self.gens}")
            if m in merged:
                merged[m] = merged[m] + iv
            else:
                merged[m] = iv
                order.append(m)
        self.terms: list[tuple[Interval, Monomial]] = [
            (merged[m], m) for m in order
            if not (merged[m].is_degenerate and merged[m].lo == 0)
        ]

    @classmethod
    def from_polynomial(cls, p: Polynomial, order: MonomialOrder | None = None):
        return cls(p.gens, [(Interval.point(c), m) for m, c in p.sorted_terms(order)])

    def family_member(self, choice: Sequence) -> Polynomial:
        """The exact polynomial obtained by picking ``choice[k]`` in the k-th coefficient."""
        if len(choice) != len(self.terms):
            raise PolynomialError(f"need {len(self.terms)} coefficient values, got {len(choice)}")
        t = {}
        for (iv, m), c in zip(self.terms, choice):
            c = _coerce(c)
            if not iv.contains(c):
                raise PolynomialError(f"coefficient {c} is outside {iv}")
            t[m] = c
        return Polynomial(self.gens, t)

    def interval_terms(self):
        return [(iv, m) for iv, m in self.terms if not iv.is_degenerate]

    def is_univariate(self) -> bool:
        return len(self.gens) == 1

    def format(self, order: MonomialOrder | None = None) -> str:
        order = order or Lex()
        items = sorted(self.terms, key=lambda t: order.key(t[1]), reverse=True)
        if not items:
            return "0"
        out = []
        for iv, m in items:
            mono = "*".join(g if e == 1 else f"{g}^{e}" for g, e in zip(self.gens, m) if e)
            if iv.is_degenerate:
                c = iv.lo
                sign = "-" if c < 0 else "+"
                mag = abs(c)
                body = mono if (mag == 1 and mono) else (f"{mag}*{mono}" if mono else str(mag))
            else:
                sign = "+"
                body = f"{iv}*{mono}" if mono else str(iv)
            out.append((sign, body))
        s = ("-" if out[0][0] == "-" else "") + out[0][1]
        for sign, body in out[1:]:
            s += f" {sign} {body}"
        return s

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"IntervalPolynomial({self.format()!r})"

    def __eq__(self, other):
        return (isinstance(other, IntervalPolynomial) and self.gens == other.gens
                and sorted(self.terms, key=lambda t: t[1]) == sorted(other.terms, key=lambda t: t[1]))


def family_member(f: IntervalPolynomial, choice: Sequence) -> Polynomial:
    return f.family_member(choice)
