"""Command-line front end: ``intervalgb <command> FILE``."""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from .apps import epsilon_divides, fuzzy_solve, i_divides, solve_univariate
from .cgs import pgb
from .groebner import reduced_gb
from .igs import (
    DEFAULT_DEPTH,
    Box,
    IntervalSystem,
    ParametricSystem,
    igs,
    igs_parametric,
)
from .interval import IntervalError
from .parse import ParseError, parse_problem
from .poly import GrevLex, Polynomial, PolynomialError, make_order
from .realroots import RealAlgebraic, to_polynomial


def _poly(p: Polynomial, order=None) -> str:
    if p.is_zero():
        return "0"
    return p.primitive(order).format(order)


def _value(v):
    if isinstance(v, RealAlgebraic) and v.as_rational() is not None:
        return str(v.as_rational())
    if isinstance(v, RealAlgebraic):
        v.refine(Fraction(1, 10 ** 12))
        return {"approx": float(v), "poly": to_polynomial(v.poly, ("t",), "t").format(),
                "lo": str(v.lo), "hi": str(v.hi)}
    return str(v)


def _value_text(v) -> str:
    if isinstance(v, RealAlgebraic) and v.as_rational() is not None:
        return str(v.as_rational())
    if isinstance(v, RealAlgebraic):
        return f"~{float(v):.10g}"
    return str(v)


def _branch_rows(branches, order, aorder, verdicts=None):
    rows = []
    for i, b in enumerate(branches):
        row = {
            "E": [_poly(e, aorder) for e in b.E],
            "N": [_poly(n, aorder) for n in b.N],
            "G": [_poly(g, order) for g in b.G],
        }
        if verdicts is not None:
            v = verdicts[i]
            row["consistency"] = "unknown" if v.unknown else "certified"
            row["certificate"] = v.certificate
            row["witness"] = ({k: _value(x) for k, x in v.witness.items()}
                              if v.witness else None)
        rows.append(row)
    return rows


def _table(rows) -> str:
    def cell(ps):
        return "{" + ", ".join(ps) + "}"

    lines = []
    head = ["E", "N", "G"]
    has_tag = rows and "consistency" in rows[0]
    body = []
    for r in rows:
        line = [cell(r["E"]), cell(r["N"]), cell(r["G"])]
        if has_tag:
            line.append(r["consistency"])
        body.append(line)
    if has_tag:
        head.append("status")
    widths = [max([len(h)] + [len(b[k]) for b in body]) for k, h in enumerate(head)]
    fmt = " | ".join("{:<%d}" % w for w in widths)
    lines.append(fmt.format(*head))
    lines.append("-+-".join("-" * w for w in widths))
    lines.extend(fmt.format(*b) for b in body)
    return "\n".join(lines)


def _sample_checks(result_branches, P, variables, parameters, box_of, order, n, seed):
    """Sample parameter points; count cover and specialization violations."""
    from .groebner import is_groebner

    rng = random.Random(seed)
    gens = tuple(variables) + tuple(parameters)
    bad = 0
    for _ in range(n):
        pt = {a: box_of(a, rng) for a in parameters}
        covering = [b for b in result_branches if b.covers(pt)]
        if not covering:
            bad += 1
            continue
        spec = [p.to_ring(gens).evaluate(pt).to_ring(tuple(variables)) for p in P]
        spec = [s for s in spec if not s.is_zero()]
        for b in covering:
            G = [g.to_ring(gens).evaluate(pt).to_ring(tuple(variables)) for g in b.G]
            G = [g for g in G if not g.is_zero()]
            want = reduced_gb(spec, order) if spec else None
            got = reduced_gb(G, order) if G else None
            if (want is None) != (got is None) or (want is not None and (
                    list(want) != list(got) or not is_groebner(G, order))):
                bad += 1
    return bad


def _emit(args, payload: dict, text: str):
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        print(text)


def cmd_gb(args, pf):
    order = make_order(args.order or pf.order_kind)
    G = reduced_gb(pf.exact_polys(), order)
    lines = [g.format(order) for g in G]
    _emit(args, {"order": order.name, "basis": lines}, "\n".join(lines))


def cmd_cgs(args, pf):
    xorder = make_order(args.order or pf.order_kind)
    res = pgb(pf.exact_polys(), pf.variables, pf.parameters, xorder, pf.porder)
    rows = _branch_rows(res.branches, res.order, pf.porder)
    payload = {"branches": rows}
    text = _table(rows)
    if args.verify:
        bad = _sample_checks(res.branches, pf.exact_polys(), pf.variables, pf.parameters,
                             lambda a, rng: Fraction(rng.randint(-8, 8), rng.randint(1, 4)),
                             xorder, args.verify, args.seed)
        payload["violations"] = bad
        text += f"\nsampled {args.verify} points: {bad} violations"
    _emit(args, payload, text)


def _run_igs(args, pf):
    xorder = make_order(args.order or pf.order_kind)
    if pf.parameters:
        missing = [a for a in pf.parameters if a not in pf.boxes]
        if missing:
            raise ParseError(f"no box given for parameters {', '.join(missing)}")
        system = ParametricSystem([p.to_ring(pf.gens) for p in pf.exact_polys()],
                                  pf.variables, pf.parameters)
        box = Box.of({a: pf.boxes[a] for a in pf.parameters})
        return igs_parametric(system, box, xorder, pf.porder, args.depth), xorder
    S = IntervalSystem(pf.interval_polys(), pf.variables)
    return igs(S, xorder, pf.porder, args.depth), xorder


def cmd_igs(args, pf):
    res, xorder = _run_igs(args, pf)
    rows = _branch_rows([b.branch for b in res.branches], res.order, res.aorder,
                        [b.verdict for b in res.branches])
    payload = {
        "box": {n: str(iv) for n, iv in res.box.coords},
        "branches": rows,
        "rejected": len(res.rejected),
    }
    text = "box: " + str(res.box) + "\n" + _table(rows)
    text += f"\n{len(rows)} branches, {len(res.rejected)} rejected"
    if args.verify:
        def draw(a, rng):
            iv = res.box[a]
            while True:
                lo = iv.lo if iv.is_bounded else Fraction(-8)
                hi = iv.hi if iv.is_bounded else Fraction(8)
                q = lo + (hi - lo) * Fraction(rng.randint(0, 64), 64)
                if iv.contains(q):
                    return q
        bad = _sample_checks([b.branch for b in res.branches], res.system.polys,
                             res.system.variables, res.system.parameters, draw,
                             xorder, args.verify, args.seed)
        payload["violations"] = bad
        text += f"\nsampled {args.verify} points: {bad} violations"
    _emit(args, payload, text)


def cmd_solve_uni(args, pf):
    polys = pf.interval_polys()
    if len(polys) != 1:
        raise ParseError("solve-uni expects exactly one polynomial")
    rs = solve_univariate(polys[0])
    parts = []
    for p in rs.parts:
        lo, hi = p.floats()
        parts.append({"lo": None if p.lo is None else _value(p.lo),
                      "hi": None if p.hi is None else _value(p.hi),
                      "lo_closed": p.lo_closed, "hi_closed": p.hi_closed,
                      "approx": [lo, hi]})
    _emit(args, {"parts": parts}, str(rs))


def cmd_idivides(args, pf):
    if pf.divisor is None:
        raise ParseError("idivides needs a 'divisor' statement")
    polys = pf.interval_polys()
    if len(polys) != 1:
        raise ParseError("idivides expects exactly one polynomial")
    xorder = make_order(args.order or pf.order_kind)
    rep = i_divides(pf.divisor, polys[0], xorder, pf.porder, args.depth)
    payload = {
        "verdict": rep.verdict,
        "condition": [_poly(e, GrevLex()) for e in rep.condition],
        "witness": {k: _value(v) for k, v in rep.witness.items()} if rep.witness else None,
        "witness_polynomial": rep.witness_polynomial.format(xorder) if rep.witness_polynomial else None,
    }
    text = f"verdict: {'yes' if rep.verdict else 'no'}"
    if rep.verdict:
        text += "\ncondition: {" + ", ".join(payload["condition"]) + "}"
        text += "\nwitness: " + ", ".join(f"{k}={_value_text(v)}" for k, v in rep.witness.items())
        text += "\nfamily member: " + payload["witness_polynomial"]
    elif rep.note:
        text += f" ({rep.note})"
    _emit(args, payload, text)


def cmd_eps_divides(args, pf):
    if pf.divisor is None or not pf.eps:
        raise ParseError("eps-divides needs 'divisor' and 'eps' statements")
    polys = pf.exact_polys()
    if len(polys) != 1:
        raise ParseError("eps-divides expects exactly one polynomial")
    xorder = make_order(args.order or pf.order_kind)
    res = epsilon_divides(polys[0], pf.divisor, pf.eps, xorder)
    payload = {"eps": str(res.eps) if res.success else None,
               "tried": [str(e) for e in res.tried]}
    if res.success and res.report.witness_polynomial is not None:
        payload["witness_polynomial"] = res.report.witness_polynomial.format(xorder)
    text = f"eps: {res.eps}" if res.success else "no scheduled eps succeeded"
    if "witness_polynomial" in payload:
        text += "\nfamily member: " + payload["witness_polynomial"]
    _emit(args, payload, text)


def cmd_fuzzy(args, pf):
    if pf.fuzzy is None:
        raise ParseError("fuzzy needs a 'fuzzy h in [a,b]' statement")
    h, hbox = pf.fuzzy
    if pf.parameters != (h,):
        raise ParseError("the fuzzy parameter must be the only parameter")
    xorder = make_order(args.order or pf.order_kind)
    rep = fuzzy_solve(pf.exact_polys(), pf.variables, h, hbox, xorder, pf.signs,
                      not args.no_signs, args.depth)
    res = rep.result
    rows = _branch_rows([b.branch for b in res.branches], res.order, res.aorder,
                        [b.verdict for b in res.branches])
    payload = {"core": str(rep.core), "branches": rows}
    text = f"{h} in {rep.core}\n" + _table(rows)
    if rep.endpoint is not None:
        ev = rep.endpoint_verdict
        payload["endpoint"] = {"value": str(rep.endpoint), "status": ev.status.value,
                               "witness": {k: _value(v) for k, v in ev.witness.items()}
                               if ev.witness else None}
        text += f"\n{h} = {rep.endpoint}: {ev.status.value}"
        if ev.witness:
            text += " at " + ", ".join(f"{k}={_value_text(v)}" for k, v in ev.witness.items())
    if rep.consistency is not None:
        payload["consistency"] = rep.consistency.status.value
        text += f"\nwhole system with sign constraints: {rep.consistency.status.value}"
    _emit(args, payload, text)


COMMANDS = {
    "gb": cmd_gb,
    "cgs": cmd_cgs,
    "igs": cmd_igs,
    "solve-uni": cmd_solve_uni,
    "idivides": cmd_idivides,
    "eps-divides": cmd_eps_divides,
    "fuzzy": cmd_fuzzy,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="intervalgb",
                                 description="Groebner bases, comprehensive and interval Groebner systems.")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("file", help="problem file ('-' for standard input)")
        sp.add_argument("--json", action="store_true", help="emit JSON")
        sp.add_argument("--depth", type=int, default=DEFAULT_DEPTH, help="subdivision budget")
        sp.add_argument("--seed", type=int, default=0, help="seed for sampling checks")
        sp.add_argument("--order", choices=["lex", "grevlex"], help="override the variable order kind")
        if name in ("cgs", "igs"):
            sp.add_argument("--verify", type=int, default=0, metavar="N",
                            help="check cover and specialization at N sampled points")
        if name == "fuzzy":
            sp.add_argument("--no-signs", action="store_true", help="ignore sign constraints")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.file == "-":
            text = sys.stdin.read()
        else:
            with open(args.file, encoding="utf-8") as fh:
                text = fh.read()
        pf = parse_problem(text)
    except (OSError, UnicodeDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ParseError, IntervalError, PolynomialError) as exc:
        print(f"{args.file}: {exc}", file=sys.stderr)
        return 1
    try:
        COMMANDS[args.command](args, pf)
    except (ParseError, IntervalError, PolynomialError) as exc:
        print(f"{args.file}: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 - reported as an internal failure
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
