"""Exact interval arithmetic over the extended rationals.

Intervals carry per-endpoint open/closed flags, so all four kinds
``[a,b]``, ``(a,b]``, ``[a,b)`` and ``(a,b)`` are first-class values.
Finite endpoints are :class:`fractions.Fraction`; the infinities are the
float markers :data:`INF` and :data:`NEG_INF` (they compare correctly
against fractions and are never used in arithmetic without a guard).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

INF = math.inf
NEG_INF = -math.inf

ExtRational = Union[Fraction, float]
Number = Union[int, Fraction, str, float]


class IntervalError(ValueError):
    """Raised for malformed intervals or undefined interval operations."""


class _Ambiguous(Exception):
    pass


def ext(value) -> ExtRational:
    """Coerce ``value`` to an extended rational (Fraction or +-inf)."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        if math.isinf(value):
            return value
        if math.isnan(value):
            raise IntervalError("NaN is not an extended rational")
        return Fraction(value)
    if isinstance(value, str):
        s = value.strip()
        if s in ("inf", "+inf", "oo"):
            return INF
        if s in ("-inf", "-oo"):
            return NEG_INF
        return Fraction(s)
    return Fraction(value)


def is_finite(x: ExtRational) -> bool:
    return not (isinstance(x, float) and math.isinf(x))


def _e_add(a, b):
    if not is_finite(a) and not is_finite(b) and a != b:
        raise _Ambiguous
    if not is_finite(a):
        return a
    if not is_finite(b):
        return b
    return a + b


def _e_mul(a, b):
    if not is_finite(a) or not is_finite(b):
        if a == 0 or b == 0:
            raise _Ambiguous
        return INF if (a > 0) == (b > 0) else NEG_INF
    return a * b


def _e_inv(a):
    """1/a for a nonzero extended rational; 1/inf is 0."""
    if not is_finite(a):
        return Fraction(0)
    return 1 / a


def format_ext(x: ExtRational) -> str:
    if x == INF:
        return "inf"
    if x == NEG_INF:
        return "-inf"
    return str(x)


@dataclass(frozen=True)
class Interval:
    """A real interval ``[lo, hi]`` with open/closed flags per endpoint."""

    lo: ExtRational
    hi: ExtRational
    lo_closed: bool = True
    hi_closed: bool = True

    def __post_init__(self):
        lo, hi = ext(self.lo), ext(self.hi)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        if lo == INF or hi == NEG_INF:
            raise IntervalError(f"empty interval with endpoints {lo}, {hi}")
        if lo > hi:
            raise IntervalError(f"lower endpoint {lo} exceeds upper endpoint {hi}")
        if (not is_finite(lo) and self.lo_closed) or (not is_finite(hi) and self.hi_closed):
            raise IntervalError("an infinite endpoint cannot be closed")
        if lo == hi and not (self.lo_closed and self.hi_closed):
            raise IntervalError(f"degenerate interval at {lo} must be closed")

    # -- constructors -------------------------------------------------------

    @classmethod
    def point(cls, value: Number) -> "Interval":
        v = ext(value)
        return cls(v, v, True, True)

    @classmethod
    def whole(cls) -> "Interval":
        return cls(NEG_INF, INF, False, False)

    @classmethod
    def parse(cls, text: str) -> "Interval":
        return parse_interval(text)

    # -- predicates ---------------------------------------------------------

    @property
    def is_degenerate(self) -> bool:
        return self.lo == self.hi

    @property
    def is_bounded(self) -> bool:
        return is_finite(self.lo) and is_finite(self.hi)

    def contains(self, q) -> bool:
        q = ext(q)
        if q < self.lo or q > self.hi:
            return False
        if q == self.lo and not self.lo_closed:
            return False
        if q == self.hi and not self.hi_closed:
            return False
        return True

    __contains__ = contains

    def contains_zero(self) -> bool:
        return self.contains(0)

    def is_subset(self, other: "Interval") -> bool:
        if self.lo < other.lo or (self.lo == other.lo and self.lo_closed and not other.lo_closed):
            return False
        if self.hi > other.hi or (self.hi == other.hi and self.hi_closed and not other.hi_closed):
            return False
        return True

    def width(self) -> ExtRational:
        if not self.is_bounded:
            return INF
        return self.hi - self.lo

    def midpoint(self) -> Fraction:
        """A rational point inside the interval (the midpoint when bounded)."""
        lo, hi = self.lo, self.hi
        if self.is_degenerate:
            return lo
        if is_finite(lo) and is_finite(hi):
            return (lo + hi) / 2
        if is_finite(lo):
            return lo + 1
        if is_finite(hi):
            return hi - 1
        return Fraction(0)

    # -- arithmetic ---------------------------------------------------------

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo, self.hi_closed, self.lo_closed)

    def __add__(self, other):
        return arith("add", self, _as_interval(other))

    __radd__ = __add__

    def __sub__(self, other):
        return arith("sub", self, _as_interval(other))

    def __rsub__(self, other):
        return arith("sub", _as_interval(other), self)

    def __mul__(self, other):
        return arith("mul", self, _as_interval(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return arith("div", self, _as_interval(other))

    def __rtruediv__(self, other):
        return arith("div", _as_interval(other), self)

    def __pow__(self, n: int) -> "Interval":
        return power(self, n)

    def scale(self, c) -> "Interval":
        return arith("mul", self, Interval.point(c))

    def __str__(self) -> str:
        left = "[" if self.lo_closed else "("
        right = "]" if self.hi_closed else ")"
        return f"{left}{format_ext(self.lo)},{format_ext(self.hi)}{right}"

    def __repr__(self) -> str:
        return f"Interval({self})"


def _as_interval(x) -> Interval:
    return x if isinstance(x, Interval) else Interval.point(x)


def _closed_end(value, closed: bool) -> bool:
    return closed and is_finite(value)


def arith(op: str, a: Interval, b: Interval) -> Interval:
    """Apply ``op`` in {add, sub, mul, div} to two intervals."""
    try:
        if op == "add":
            lo = _e_add(a.lo, b.lo)
            hi = _e_add(a.hi, b.hi)
            return _make(lo, hi, a.lo_closed and b.lo_closed, a.hi_closed and b.hi_closed)
        if op == "sub":
            lo = _e_add(a.lo, -b.hi)
            hi = _e_add(a.hi, -b.lo)
            return _make(lo, hi, a.lo_closed and b.hi_closed, a.hi_closed and b.lo_closed)
        if op == "mul":
            return _mul(a, b)
        if op == "div":
            if not _divisor_ok(b):
                raise IntervalError(
                    f"divisor {b} contains zero; use recip() which returns an IntervalUnion"
                )
            return _mul(a, _inverse(b))
    except _Ambiguous:
        return Interval.whole()
    raise IntervalError(f"unknown operation {op!r}")


def _inverse(b: Interval) -> Interval:
    """1/b for b not containing zero (open zero endpoints allowed)."""
    lo = NEG_INF if b.hi == 0 else _e_inv(b.hi)
    hi = INF if b.lo == 0 else _e_inv(b.lo)
    return _make(lo, hi, b.hi_closed and is_finite(b.hi), b.lo_closed and is_finite(b.lo))


def _divisor_ok(b: Interval) -> bool:
    return (b.lo > 0 or b.hi < 0
            or (b.lo == 0 and not b.lo_closed)
            or (b.hi == 0 and not b.hi_closed))


def _make(lo, hi, lo_closed, hi_closed) -> Interval:
    lo_closed = lo_closed and is_finite(lo)
    hi_closed = hi_closed and is_finite(hi)
    if lo == hi:
        lo_closed = hi_closed = True
    return Interval(lo, hi, lo_closed, hi_closed)


def _mul(a: Interval, b: Interval) -> Interval:
    pairs = []
    for x, xc in ((a.lo, a.lo_closed), (a.hi, a.hi_closed)):
        for y, yc in ((b.lo, b.lo_closed), (b.hi, b.hi_closed)):
            pairs.append((_e_mul(x, y), xc and yc))
    lo = min(p for p, _ in pairs)
    hi = max(p for p, _ in pairs)

    # A nonzero extreme of x*y over a box is only reached at corners; zero is
    # reached whenever either factor contains zero.
    def attained(v):
        if not is_finite(v):
            return False
        if v == 0:
            return a.contains(0) or b.contains(0)
        return any(p == v and c for p, c in pairs)

    if lo == hi:
        return Interval.point(lo)
    return Interval(lo, hi, attained(lo), attained(hi))


def recip(a: Interval) -> "IntervalUnion":
    """The set ``{1/x : x in a, x != 0}`` as a union of intervals."""
    if a.is_degenerate and a.lo == 0:
        raise IntervalError("reciprocal of zero")
    if _divisor_ok(a):
        return IntervalUnion([_inverse(a)])
    if a.lo == 0:
        # (0, b] -> [1/b, inf)
        return IntervalUnion([Interval(_e_inv(a.hi), INF, _closed_end(a.hi, a.hi_closed), False)])
    if a.hi == 0:
        return IntervalUnion([Interval(NEG_INF, _e_inv(a.lo), False, _closed_end(a.lo, a.lo_closed))])
    # lo < 0 < hi
    left = Interval(NEG_INF, _e_inv(a.lo), False, _closed_end(a.lo, a.lo_closed))
    right = Interval(_e_inv(a.hi), INF, _closed_end(a.hi, a.hi_closed), False)
    return IntervalUnion([left, right])


def power(a: Interval, n: int) -> Interval:
    """Interval power with the sign-aware rule (``X**2`` is never negative)."""
    if n < 0:
        raise IntervalError("negative exponent")
    if n == 0:
        return Interval.point(1)
    if n == 1:
        return a

    def p(x):
        if not is_finite(x):
            return INF if (x > 0 or n % 2 == 0) else NEG_INF
        return x ** n

    lo, hi, i, j = a.lo, a.hi, a.lo_closed, a.hi_closed
    if n % 2 == 1 or lo >= 0:
        return _make(p(lo), p(hi), i, j)
    if hi <= 0:
        return _make(p(hi), p(lo), j, i)
    c = i if abs(hi) < abs(lo) else j
    if abs(hi) == abs(lo):
        c = i or j
    return _make(Fraction(0), max(p(lo), p(hi)), True, c)


def contains(a: Interval, q) -> bool:
    return a.contains(q)


_NUM = r"[+-]?\s*(?:inf|oo|\d+(?:/\d+)?(?:\.\d+)?)"
_INTERVAL_RE = re.compile(rf"^\s*([\[(])\s*({_NUM})\s*,\s*({_NUM})\s*([\])])\s*$")


def parse_interval(text: str) -> Interval:
    """Parse ``[a,b]``, ``(a,b]``, ``[a,b)`` or ``(a,b)``."""
    m = _INTERVAL_RE.match(text)
    if not m:
        raise IntervalError(f"malformed interval {text!r}")
    lo = ext(m.group(2).replace(" ", ""))
    hi = ext(m.group(3).replace(" ", ""))
    return Interval(lo, hi, m.group(1) == "[", m.group(4) == "]")


class IntervalUnion:
    """Sorted union of pairwise disjoint, non-touching intervals."""

    def __init__(self, parts: Iterable[Interval] = ()):
        self.parts: tuple[Interval, ...] = tuple(_normalize(list(parts)))

    def contains(self, q) -> bool:
        return any(p.contains(q) for p in self.parts)

    __contains__ = contains

    def __iter__(self):
        return iter(self.parts)

    def __len__(self):
        return len(self.parts)

    def __eq__(self, other):
        if isinstance(other, Interval):
            other = IntervalUnion([other])
        return isinstance(other, IntervalUnion) and self.parts == other.parts

    def __hash__(self):
        return hash(self.parts)

    def __str__(self):
        if not self.parts:
            return "{}"
        return " U ".join(str(p) for p in self.parts)

    def __repr__(self):
        return f"IntervalUnion({self})"


def _normalize(parts: list[Interval]) -> list[Interval]:
    parts = sorted(parts, key=lambda p: (p.lo, not p.lo_closed))
    out: list[Interval] = []
    for p in parts:
        if out:
            q = out[-1]
            touching = p.lo < q.hi or (p.lo == q.hi and (p.lo_closed or q.hi_closed))
            if touching:
                if p.hi > q.hi or (p.hi == q.hi and p.hi_closed):
                    out[-1] = Interval(q.lo, p.hi, q.lo_closed, p.hi_closed)
                continue
        out.append(p)
    return out
