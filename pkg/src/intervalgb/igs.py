"""Interval Groebner systems.

An interval polynomial system is turned into a parametric one by giving
every non-degenerate interval coefficient its own parameter.  The PGB
driver then runs with a consistency test that only accepts conditions
(E, N) whose solution region meets the box of coefficient intervals.

Deciding whether ``V(E) \\ V(N)`` meets a box is done in stages: a complex
emptiness check on the box-augmented system, an exact rational witness
search, and interval branch-and-prune.  When none of these settles the
question the verdict is ``UNKNOWN`` and the branch is kept but flagged.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .cgs import Branch, pgb_main
from .groebner import radical_member, reduced_gb
from .interval import INF, NEG_INF, Interval, is_finite, power
from .poly import (
    BlockOrder,
    GrevLex,
    IntervalPolynomial,
    MonomialOrder,
    Polynomial,
    PolynomialError,
)
from .realroots import RealAlgebraic, from_polynomial, gcd_poly, isolate_real_roots, rational_roots

DEFAULT_DEPTH = 24
DEFAULT_MAX_BOXES = 4000
DEFAULT_WITNESS_NODES = 3000
DEFAULT_PROBES = 200
PROBE_EVERY = 3
PROBE_NODES = 200


class AugmentError(ValueError):
    """Raised when a box coordinate has no auxiliary-polynomial encoding."""


# ---------------------------------------------------------------------------
# systems and boxes
# ---------------------------------------------------------------------------

@dataclass
class IntervalSystem:
    polys: list[IntervalPolynomial]
    variables: tuple

    def __post_init__(self):
        self.variables = tuple(self.variables)
        if not self.polys:
            raise PolynomialError("an interval system needs at least one polynomial")
        for p in self.polys:
            if p.gens != self.variables:
                raise PolynomialError(f"polynomial ring {p.gens} differs from {self.variables}")


@dataclass(frozen=True)
class Box:
    """Parameter intervals, with the (polynomial, term) each parameter came from."""

    coords: tuple
    provenance: Mapping = field(default_factory=dict)

    @classmethod
    def of(cls, intervals: Mapping[str, Interval], provenance=None) -> "Box":
        return cls(tuple(intervals.items()), dict(provenance or {}))

    @property
    def names(self) -> tuple:
        return tuple(n for n, _ in self.coords)

    def as_dict(self) -> dict:
        return dict(self.coords)

    def __getitem__(self, name: str) -> Interval:
        for n, iv in self.coords:
            if n == name:
                return iv
        raise KeyError(name)

    def __len__(self):
        return len(self.coords)

    def contains(self, point: Mapping[str, object]) -> bool:
        return all(iv.contains(point[n]) for n, iv in self.coords)

    def restrict(self, names) -> "Box":
        keep = set(names)
        return Box(tuple((n, iv) for n, iv in self.coords if n in keep),
                   {n: v for n, v in self.provenance.items() if n in keep})

    def midpoint(self) -> dict:
        return {n: iv.midpoint() for n, iv in self.coords}

    def __str__(self):
        return ", ".join(f"{n} in {iv}" for n, iv in self.coords)


@dataclass
class ParametricSystem:
    polys: list[Polynomial]
    variables: tuple
    parameters: tuple

    @property
    def gens(self) -> tuple:
        return self.variables + self.parameters


def parameterize(S: IntervalSystem, prefix: str = "h") -> tuple[ParametricSystem, Box]:
    """Replace every non-degenerate interval coefficient by a fresh parameter."""
    variables = S.variables
    k = 0
    params: list[str] = []
    intervals: dict = {}
    prov: dict = {}
    plan = []
    for pi, f in enumerate(S.polys):
        terms = []
        for ti, (iv, m) in enumerate(f.terms):
            if iv.is_degenerate:
                terms.append((None, iv.lo, m))
            else:
                k += 1
                name = f"{prefix}{k}"
                while name in variables:
                    name = "_" + name
                params.append(name)
                intervals[name] = iv
                prov[name] = (pi, ti)
                terms.append((name, None, m))
        plan.append(terms)
    gens = variables + tuple(params)
    t = len(params)
    polys = []
    for terms in plan:
        d: dict = {}
        for name, c, m in terms:
            tail = [0] * t
            if name is None:
                d[tuple(m) + tuple(tail)] = c
            else:
                tail[params.index(name)] = 1
                d[tuple(m) + tuple(tail)] = 1
        polys.append(Polynomial(gens, d))
    return ParametricSystem(polys, variables, tuple(params)), Box.of(intervals, prov)


# ---------------------------------------------------------------------------
# box-augmented systems
# ---------------------------------------------------------------------------

def _aux_polynomial(a: Polynomial, b: Polynomial, iv: Interval) -> Polynomial | None:
    lo, hi = iv.lo, iv.hi
    if iv.is_degenerate:
        return a - lo
    if not is_finite(lo) and not is_finite(hi):
        return None
    if is_finite(lo) and iv.lo_closed and is_finite(hi) and not iv.hi_closed:
        return a + (a - hi) * b * b - lo
    if is_finite(lo) and iv.lo_closed and not is_finite(hi):
        return a - lo - b * b
    if not is_finite(lo) and is_finite(hi) and iv.hi_closed:
        return a - hi + b * b
    if iv.lo_closed and iv.hi_closed:
        return (a - lo) * (hi - a) - b * b
    raise AugmentError(f"no auxiliary encoding for {iv}; use the direct box search")


def augment(E: Sequence[Polynomial], N: Sequence[Polynomial], box: Box) -> list[Polynomial]:
    """System over ``params + b_* + c_*`` with a real root iff V(E)\\V(N) meets the box.

    ``E`` and ``N`` live in the ring whose generators are the box names.
    """
    names = box.names
    bnames = [f"b_{n}" for n in names]
    cnames = [f"c_{i + 1}" for i in range(len(N))]
    gens = tuple(names) + tuple(bnames) + tuple(cnames)
    F = [e.to_ring(gens) for e in E if e]
    for n, bn in zip(names, bnames):
        aux = _aux_polynomial(Polynomial.var(gens, n), Polynomial.var(gens, bn), box[n])
        if aux is not None:
            F.append(aux)
    if N:
        prod = Polynomial.constant(gens, 1)
        for g, cn in zip(N, cnames):
            prod = prod * (Polynomial.var(gens, cn) * g.to_ring(gens) - 1)
        F.append(prod)
    return F


def witness_from_aux(iv: Interval, eta_squared) -> Fraction:
    """Parameter value recovered from an auxiliary square ``b^2`` for ``[lo, hi)``."""
    s = Fraction(eta_squared)
    return (iv.lo + iv.hi * s) / (1 + s)


# ---------------------------------------------------------------------------
# verdicts
# ---------------------------------------------------------------------------

class Status(enum.Enum):
    CONSISTENT = "consistent"
    INCONSISTENT = "inconsistent"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class ConsistencyVerdict:
    status: Status
    witness: dict | None = None
    certificate: str | None = None

    @property
    def consistent(self) -> bool:
        return self.status is Status.CONSISTENT

    @property
    def inconsistent(self) -> bool:
        return self.status is Status.INCONSISTENT

    @property
    def unknown(self) -> bool:
        return self.status is Status.UNKNOWN

    def __str__(self):
        w = ""
        if self.witness:
            w = " at " + ", ".join(f"{k}={v}" for k, v in self.witness.items())
        return f"{self.status.value} ({self.certificate}){w}"


def _invertible(box: Box) -> list[str]:
    """Box coordinates whose interval excludes zero."""
    return [n for n, iv in box.coords if not iv.contains(0)]


def _with_inverses(F: Sequence[Polynomial], names: Sequence[str]) -> list[Polynomial]:
    """Append ``u*a - 1`` for each name; only points with every such ``a != 0`` survive."""
    if not F or not names:
        return list(F)
    gens = F[0].gens
    us = []
    for n in names:
        u = f"u_{n}"
        while u in gens or u in us:
            u = "_" + u
        us.append(u)
    ext = gens + tuple(us)
    out = [f.to_ring(ext) for f in F]
    for n, u in zip(names, us):
        out.append(Polynomial.var(ext, u) * Polynomial.var(ext, n) - 1)
    return out


def _complex_empty(E, N, box: Box) -> bool:
    """The box-augmented system of ``(E, N)`` has no complex solution."""
    if E and reduced_gb(list(E), GrevLex()).is_unit:
        return True
    if len(N) <= 6:
        try:
            return reduced_gb(augment(E, N, box), GrevLex()).is_unit
        except AugmentError:
            pass
    return all(radical_member(g, list(E)) for g in N)


def _saturated_empty(E, N, box: Box) -> bool:
    """Emptiness once every coordinate whose interval excludes zero is inverted."""
    inv = _invertible(box)
    if not inv or not E:
        return False
    Ei = _with_inverses(list(E), inv)
    gens = Ei[0].gens
    return all(radical_member(g.to_ring(gens), Ei) for g in N)


def _candidates(iv: Interval, extra: int = 8) -> list[Fraction]:
    out: list[Fraction] = []

    def add(q):
        q = Fraction(q)
        if iv.contains(q) and q not in out:
            out.append(q)

    add(0)
    add(iv.midpoint())
    if iv.lo_closed:
        add(iv.lo)
    if iv.hi_closed:
        add(iv.hi)
    if iv.is_bounded:
        w = iv.hi - iv.lo
        for k in (1, 3, 2, 6, 5, 7):
            add(iv.lo + w * k / 8)
        for k in range(1, extra):
            add(iv.lo + w * Fraction(k, extra + 1))
    else:
        for q in (1, -1, 2, -2, Fraction(1, 2), Fraction(-1, 2), 10, -10):
            add(q)
        if is_finite(iv.lo):
            for d in (1, 2, Fraction(1, 2)):
                add(iv.lo + d)
        if is_finite(iv.hi):
            for d in (1, 2, Fraction(1, 2)):
                add(iv.hi - d)
    return out


class _Budget(Exception):
    pass


def _contains(iv: Interval, v) -> bool:
    if isinstance(v, RealAlgebraic):
        lo = v.compare_rational(iv.lo) if is_finite(iv.lo) else 1
        hi = v.compare_rational(iv.hi) if is_finite(iv.hi) else -1
        return (lo > 0 or (lo == 0 and iv.lo_closed)) and (hi < 0 or (hi == 0 and iv.hi_closed))
    return iv.contains(v)


def value_sign(p: Polynomial, point: Mapping) -> int:
    """Exact sign of ``p`` at a point with rational coordinates and at most one algebraic one."""
    alg = [(n, v) for n, v in point.items() if isinstance(v, RealAlgebraic) and n in p.gens]
    rat = {n: v for n, v in point.items() if not isinstance(v, RealAlgebraic) and n in p.gens}
    if len(alg) > 1:
        raise ValueError("at most one algebraic coordinate is supported")
    r = p.evaluate(rat)
    if not alg:
        c = r.constant_value() if r.is_constant() else None
        if c is None:
            raise ValueError("point does not assign every generator")
        return (c > 0) - (c < 0)
    name, root = alg[0]
    if set(r.used_vars()) - {name}:
        raise ValueError("point does not assign every generator")
    return root.sign_of(from_polynomial(r, name))


def find_witness(E: Sequence[Polynomial], N: Sequence[Polynomial], box: Box,
                 max_nodes: int = DEFAULT_WITNESS_NODES) -> tuple[dict | None, bool]:
    """Search for a point of the box where E vanishes and some N does not.

    Returns ``(witness, exhaustive)``.  Coordinates are rational except
    possibly the last one assigned, which may be a :class:`RealAlgebraic`.
    When no witness is found and ``exhaustive`` is true, the search only
    ever branched on the complete real root sets of univariate
    polynomials, so the region is certainly empty.
    """
    names = box.names
    ivs = box.as_dict()
    E = [e for e in E if e]
    if E:
        basis = list(reduced_gb(E, GrevLex()))
        if basis and basis[0].is_constant():
            return None, True
        E = basis
    nodes = 0
    exhaustive = True

    def n_ok(pt):
        return any(value_sign(g, pt) != 0 for g in N)

    def fill(assign):
        nonlocal exhaustive
        free = [n for n in names if n not in assign]
        if not free:
            if n_ok(assign):
                return assign
            return None
        cands = {n: _candidates(ivs[n]) for n in free}
        tries = [dict(assign, **{n: cands[n][0] for n in free})]
        for t in range(1, 24):
            tries.append(dict(assign, **{n: cands[n][(t * (i + 1)) % len(cands[n])]
                                         for i, n in enumerate(free)}))
        for pt in tries:
            if n_ok(pt):
                return pt
        exhaustive = False
        return None

    def pick(rem, blocked=()):
        score = {}
        for r in rem:
            for v in r.used_vars():
                if v in blocked:
                    continue
                d = r.degree_in(v)
                s = score.get(v, (0, 0))
                score[v] = (max(s[0], d), s[1] + 1)
        return max(score, key=lambda v: (score[v], -names.index(v)))

    def algebraic_finish(assign, v, up):
        """Try the irrational roots of ``up`` in the box when ``v`` is the last E-variable."""
        for r in isolate_real_roots(up, ivs[v].lo, ivs[v].hi, ivs[v].lo_closed, ivs[v].hi_closed):
            if r.as_rational() is not None:
                continue
            found = fill(dict(assign, **{v: r}))
            if found is not None:
                return found
        return None

    def dfs(assign):
        nonlocal nodes, exhaustive
        nodes += 1
        if nodes > max_nodes:
            raise _Budget
        rem = []
        for e in E:
            r = e.evaluate({k: q for k, q in assign.items()})
            if r.is_zero():
                continue
            if r.is_constant():
                return None
            rem.append(r)
        if not rem:
            return fill(assign)
        univariate = []
        for r in rem:
            used = r.used_vars()
            if len(used) == 1:
                v = used[0]
                up = from_polynomial(r, v)
                univariate.append((has_irrational_root_in(up, ivs[v]), v, up))
        univariate.sort(key=lambda t: t[0])
        if univariate and not univariate[0][0]:
            _, v, up = univariate[0]
            for q in rational_roots(up, ivs[v]):
                found = dfs(dict(assign, **{v: q}))
                if found is not None:
                    return found
            return None
        if univariate:
            v = univariate[0][1]
            if all(tuple(x.used_vars()) == (v,) for x in rem):
                g = univariate[0][2]
                for x in rem:
                    g = gcd_poly(g, from_polynomial(x, v))
                if len(g) <= 1:
                    return None
                for q in rational_roots(g, ivs[v]):
                    found = dfs(dict(assign, **{v: q}))
                    if found is not None:
                        return found
                return algebraic_finish(assign, v, g)
        exhaustive = False
        blocked = {t[1] for t in univariate}
        free = [x for x in rem if set(x.used_vars()) - blocked]
        if not free:
            return None
        v = pick(free, blocked)
        for q in _candidates(ivs[v]):
            found = dfs(dict(assign, **{v: q}))
            if found is not None:
                return found
        return None

    try:
        w = dfs({})
    except _Budget:
        return None, False
    return w, (w is None and exhaustive)


def has_irrational_root_in(up, iv: Interval) -> bool:
    roots = isolate_real_roots(up, iv.lo, iv.hi, iv.lo_closed, iv.hi_closed)
    return any(r.as_rational() is None for r in roots)


def eval_interval(p: Polynomial, ivs: Mapping[str, Interval]) -> Interval:
    """Natural interval extension of ``p`` over the box ``ivs``."""
    total = Interval.point(0)
    boxes = [ivs[g] for g in p.gens]
    for m, c in p.terms.items():
        term = Interval.point(c)
        for iv, e in zip(boxes, m):
            if e:
                term = term * power(iv, e)
        total = total + term
    return total


def _split(iv: Interval) -> tuple[Interval, Interval]:
    lo, hi = iv.lo, iv.hi
    if is_finite(lo) and is_finite(hi):
        mid = (lo + hi) / 2
    elif is_finite(lo):
        mid = lo + max(Fraction(1), abs(lo))
    elif is_finite(hi):
        mid = hi - max(Fraction(1), abs(hi))
    else:
        mid = Fraction(0)
    return Interval(lo, mid, iv.lo_closed, False), Interval(mid, hi, True, iv.hi_closed)


def branch_and_prune(E: Sequence[Polynomial], N: Sequence[Polynomial], box: Box,
                     depth: int = DEFAULT_DEPTH, max_boxes: int = DEFAULT_MAX_BOXES,
                     probes: int = DEFAULT_PROBES) -> tuple[bool, dict | None]:
    """Bisect the box, discarding sub-boxes where some E avoids 0 or every N is 0.

    Returns ``(excluded, witness)``.  Surviving sub-boxes are probed with a
    small witness search, so thin feasible regions that the candidate grid
    of the whole box misses are still found.
    """
    names = [n for n, iv in box.coords if not iv.is_degenerate]
    E = [e for e in E if e]
    N = [g for g in N if g]
    stack = [(box.as_dict(), 0)]
    processed = 0
    while stack:
        ivs, d = stack.pop()
        processed += 1
        if any(not eval_interval(e, ivs).contains(0) for e in E):
            continue
        if all(_is_zero_interval(eval_interval(g, ivs)) for g in N):
            continue
        if probes > 0 and d % PROBE_EVERY == PROBE_EVERY - 1:
            probes -= 1
            w, _ = find_witness(E, N, Box.of(ivs), PROBE_NODES)
            if w is not None:
                return False, w
        if d >= depth or processed >= max_boxes or not names:
            return False, None
        widest = max(names, key=lambda n: (ivs[n].width(), -names.index(n)))
        left, right = _split(ivs[widest])
        stack.append((dict(ivs, **{widest: right}), d + 1))
        stack.append((dict(ivs, **{widest: left}), d + 1))
    return True, None


def _is_zero_interval(iv: Interval) -> bool:
    return iv.is_degenerate and iv.lo == 0


def real_root_in_box(E: Sequence[Polynomial], N: Sequence[Polynomial], box: Box,
                     depth: int = DEFAULT_DEPTH, max_boxes: int = DEFAULT_MAX_BOXES,
                     max_nodes: int = DEFAULT_WITNESS_NODES) -> ConsistencyVerdict:
    """Decide whether ``V(E) \\ V(N)`` has a real point inside ``box``.

    ``E`` and ``N`` are polynomials over the box names (other box
    coordinates are unconstrained).
    """
    gens = box.names
    E = [e.to_ring(gens) for e in E if e]
    N = [g.to_ring(gens) for g in N if g]
    if any(e.is_constant() for e in E) or not N:
        return ConsistencyVerdict(Status.INCONSISTENT, None, "complex-empty")
    used = set()
    for p in E + N:
        used.update(p.used_vars())
    sub = box.restrict(used)
    sub_E = [e.to_ring(sub.names) for e in E]
    sub_N = [g.to_ring(sub.names) for g in N]
    if _complex_empty(sub_E, sub_N, sub):
        return ConsistencyVerdict(Status.INCONSISTENT, None, "complex-empty")
    if _saturated_empty(sub_E, sub_N, sub):
        return ConsistencyVerdict(Status.INCONSISTENT, None, "box-pruned")
    w, exhaustive = find_witness(sub_E, sub_N, sub, max_nodes)
    if w is not None:
        full = box.midpoint()
        full.update(w)
        return ConsistencyVerdict(Status.CONSISTENT, full, "witness-found")
    if exhaustive:
        return ConsistencyVerdict(Status.INCONSISTENT, None, "box-pruned")
    excluded, w = branch_and_prune(sub_E, sub_N, sub, depth, max_boxes)
    if excluded:
        return ConsistencyVerdict(Status.INCONSISTENT, None, "box-pruned")
    if w is not None:
        full = box.midpoint()
        full.update(w)
        return ConsistencyVerdict(Status.CONSISTENT, full, "witness-found")
    return ConsistencyVerdict(Status.UNKNOWN, None, "budget-exhausted")


def check_witness(E, N, box: Box, witness: Mapping) -> bool:
    """Exact validation of a witness point."""
    return (all(_contains(iv, witness[n]) for n, iv in box.coords)
            and all(value_sign(e, witness) == 0 for e in E if e)
            and any(value_sign(g, witness) != 0 for g in N))


def interval_is_consistent(E: Sequence[Polynomial], N: Sequence[Polynomial], box: Box,
                           depth: int = DEFAULT_DEPTH, max_boxes: int = DEFAULT_MAX_BOXES
                           ) -> tuple[bool, ConsistencyVerdict]:
    """Redundancy test against the box, then the radical-membership filter."""
    verdict = real_root_in_box(E, N, box, depth, max_boxes)
    if verdict.inconsistent:
        return False, verdict
    if verdict.consistent:
        return True, verdict
    gens = box.names
    Ep = [e.to_ring(gens) for e in E if e]
    if all(radical_member(g.to_ring(gens), Ep) for g in N):
        return False, ConsistencyVerdict(Status.INCONSISTENT, None, "complex-empty")
    return True, verdict


# ---------------------------------------------------------------------------
# the IGS driver
# ---------------------------------------------------------------------------

@dataclass
class IGSBranch:
    branch: Branch
    verdict: ConsistencyVerdict

    @property
    def E(self):
        return self.branch.E

    @property
    def N(self):
        return self.branch.N

    @property
    def G(self):
        return self.branch.G

    @property
    def unknown(self) -> bool:
        return self.verdict.unknown


@dataclass
class IGSResult:
    branches: list[IGSBranch]
    box: Box
    system: ParametricSystem
    order: BlockOrder
    rejected: list[IGSBranch] = field(default_factory=list)

    def __iter__(self):
        return iter(self.branches)

    def __len__(self):
        return len(self.branches)

    @property
    def unknown_flags(self) -> list[bool]:
        return [b.unknown for b in self.branches]

    @property
    def xorder(self) -> MonomialOrder:
        return self.order.first

    @property
    def aorder(self) -> MonomialOrder:
        return self.order.second


def _key(E, N):
    return (tuple(E), tuple(N))


def igs_parametric(system: ParametricSystem, box: Box, xorder: MonomialOrder,
                   aorder: MonomialOrder | None = None, depth: int = DEFAULT_DEPTH,
                   max_boxes: int = DEFAULT_MAX_BOXES) -> IGSResult:
    """Run PGB with the box-aware consistency test on an already parametric system."""
    aorder = aorder or GrevLex()
    order = BlockOrder(xorder, len(system.variables), aorder)
    gens = system.gens
    P = [p.to_ring(gens) for p in system.polys]
    verdicts: dict = {}

    def consistent(E, N):
        key = _key(E, N)
        if key not in verdicts:
            verdicts[key] = interval_is_consistent(E, N, box, depth, max_boxes)
        return verdicts[key][0]

    rejected: list[Branch] = []
    one = Polynomial.constant(gens, 1)
    if not system.parameters:
        G = list(reduced_gb(P, order))
        branch = Branch([], [Polynomial.constant((), 1)], G)
        return IGSResult([IGSBranch(branch, ConsistencyVerdict(Status.CONSISTENT, {}, "witness-found"))],
                         box, system, order)
    branches = pgb_main(P, [], [one], order, system.parameters, consistent, rejected.append)
    out = [IGSBranch(b, verdicts[_key(b.E, b.N)][1]) for b in branches]
    rej = [IGSBranch(b, verdicts[_key(b.E, b.N)][1]) for b in rejected]
    return IGSResult(out, box, system, order, rej)


def igs(S: IntervalSystem, xorder: MonomialOrder, aorder: MonomialOrder | None = None,
        depth: int = DEFAULT_DEPTH, max_boxes: int = DEFAULT_MAX_BOXES,
        prefix: str = "h") -> IGSResult:
    """Interval Groebner system of ``S`` w.r.t. ``xorder`` on the variables."""
    system, box = parameterize(S, prefix)
    return igs_parametric(system, box, xorder, aorder, depth, max_boxes)
