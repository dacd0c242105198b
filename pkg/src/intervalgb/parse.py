"""Problem-file parser.

A problem file is a list of ``;``-terminated statements::

    vars x, y;
    params a, b;
    order lex(x > y);
    porder grevlex(a > b);
    poly [-1,2)*x*y + [0,1)*y + [3,5);
    box a in [1,2);
    divisor x - 2*y;
    eps 1/4, 1/2, 1, 2;
    fuzzy h in [0,1];
    sign x in (-inf,0];

``#`` starts a comment.  A parenthesis opens an interval exactly when it
contains a comma at nesting depth zero; square brackets always open an
interval.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .interval import INF, NEG_INF, Interval, IntervalError
from .poly import IntervalPolynomial, MonomialOrder, Polynomial, make_order


class ParseError(ValueError):
    def __init__(self, msg: str, line: int = 0, col: int = 0):
        self.msg, self.line, self.col = msg, line, col
        super().__init__(f"line {line}, column {col}: {msg}" if line else msg)


@dataclass
class ProblemFile:
    variables: tuple = ()
    parameters: tuple = ()
    order_kind: str = "lex"
    porder_kind: str = "grevlex"
    polys: list = field(default_factory=list)
    boxes: dict = field(default_factory=dict)
    divisor: Polynomial | None = None
    eps: list = field(default_factory=list)
    fuzzy: tuple | None = None
    signs: dict = field(default_factory=dict)

    @property
    def gens(self) -> tuple:
        return self.variables + self.parameters

    @property
    def order(self) -> MonomialOrder:
        return make_order(self.order_kind)

    @property
    def porder(self) -> MonomialOrder:
        return make_order(self.porder_kind)

    @property
    def is_interval(self) -> bool:
        return any(isinstance(p, IntervalPolynomial) for p in self.polys)

    def exact_polys(self) -> list[Polynomial]:
        out = []
        for p in self.polys:
            if isinstance(p, IntervalPolynomial):
                if p.interval_terms():
                    raise ParseError("expected exact polynomials, found interval coefficients")
                out.append(Polynomial(p.gens, {m: iv.lo for iv, m in p.terms}))
            else:
                out.append(p)
        return out

    def interval_polys(self) -> list[IntervalPolynomial]:
        out = []
        for p in self.polys:
            if isinstance(p, Polynomial):
                if set(p.used_vars()) & set(self.parameters):
                    raise ParseError("parametric polynomial where an interval polynomial was expected")
                p = IntervalPolynomial.from_polynomial(p.to_ring(self.variables))
            out.append(p)
        return out


# ---------------------------------------------------------------------------
# tokens
# ---------------------------------------------------------------------------

_NUMBER = re.compile(r"\d+(?:\.\d+)?(?:/\d+)?")
_NAME = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")


@dataclass
class _Tok:
    kind: str      # num, name, op, interval, end
    value: object
    line: int
    col: int


def _number(text: str) -> Fraction:
    if "/" in text:
        p, q = text.split("/")
        if Fraction(q) == 0:
            raise ZeroDivisionError(text)
        return Fraction(p) / Fraction(q)
    return Fraction(text)


def _endpoint(text: str, line: int, col: int):
    t = text.strip().replace(" ", "")
    if t in ("inf", "+inf", "oo", "+oo"):
        return INF
    if t in ("-inf", "-oo"):
        return NEG_INF
    sign = 1
    if t[:1] in "+-":
        sign = -1 if t[0] == "-" else 1
        t = t[1:]
    if not _NUMBER.fullmatch(t):
        raise ParseError(f"bad interval endpoint {text.strip()!r}", line, col)
    try:
        return sign * _number(t)
    except ZeroDivisionError:
        raise ParseError("division by zero in endpoint", line, col) from None


class _Lexer:
    def __init__(self, text: str, line: int, col: int):
        self.text = text
        self.line0 = line
        self.col0 = col

    def _pos(self, i: int) -> tuple[int, int]:
        before = self.text[:i]
        nl = before.count("\n")
        if nl:
            return self.line0 + nl, i - before.rfind("\n")
        return self.line0, self.col0 + i

    def _interval_end(self, i: int) -> int | None:
        """Index of the closer if the bracket at ``i`` opens an interval."""
        depth = 0
        comma = False
        for j in range(i + 1, len(self.text)):
            ch = self.text[j]
            if ch in "([":
                depth += 1
            elif ch in ")]":
                if depth == 0:
                    return j if (comma or self.text[i] == "[") else None
                depth -= 1
            elif ch == "," and depth == 0:
                comma = True
        if self.text[i] == "[":
            line, col = self._pos(i)
            raise ParseError("unterminated interval", line, col)
        return None

    def tokens(self) -> list[_Tok]:
        out = []
        s = self.text
        i = 0
        while i < len(s):
            ch = s[i]
            if ch.isspace():
                i += 1
                continue
            line, col = self._pos(i)
            if ch in "[(":
                j = self._interval_end(i)
                if j is not None:
                    body = s[i + 1:j]
                    if body.count(",") != 1:
                        raise ParseError("an interval needs exactly two endpoints", line, col)
                    a, b = body.split(",")
                    lo, hi = _endpoint(a, line, col), _endpoint(b, line, col)
                    try:
                        iv = Interval(lo, hi, ch == "[", s[j] == "]")
                    except IntervalError as exc:
                        raise ParseError(f"malformed interval {s[i:j + 1]}: {exc}", line, col) from None
                    out.append(_Tok("interval", iv, line, col))
                    i = j + 1
                    continue
            m = _NUMBER.match(s, i)
            if m:
                try:
                    out.append(_Tok("num", _number(m.group()), line, col))
                except ZeroDivisionError:
                    raise ParseError("division by zero", line, col) from None
                i = m.end()
                continue
            m = _NAME.match(s, i)
            if m:
                out.append(_Tok("name", m.group(), line, col))
                i = m.end()
                continue
            if ch in "+-*/^()":
                out.append(_Tok("op", ch, line, col))
                i += 1
                continue
            raise ParseError(f"unexpected character {ch!r}", line, col)
        line, col = self._pos(len(s))
        out.append(_Tok("end", None, line, col))
        return out


# ---------------------------------------------------------------------------
# expressions
# ---------------------------------------------------------------------------

class _Expr:
    """Recursive-descent polynomial parser; intervals may only scale a single term."""

    def __init__(self, toks: list[_Tok], gens: tuple):
        self.toks = toks
        self.i = 0
        self.gens = gens

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def fail(self, msg: str, tok: _Tok | None = None):
        tok = tok or self.peek()
        raise ParseError(msg, tok.line, tok.col)

    def parse(self):
        terms = self.sum()
        if self.peek().kind != "end":
            self.fail(f"unexpected {self.peek().value!r}")
        return terms

    # a value is (Polynomial, Interval | None)
    def sum(self):
        out = []
        sign = 1
        if self.peek().kind == "op" and self.peek().value in "+-":
            sign = -1 if self.take().value == "-" else 1
        out.append(self.scaled(self.product(), sign))
        while self.peek().kind == "op" and self.peek().value in "+-":
            sign = -1 if self.take().value == "-" else 1
            out.append(self.scaled(self.product(), sign))
        return out

    @staticmethod
    def scaled(v, sign):
        p, iv = v
        if sign > 0:
            return v
        return (p, -iv) if iv is not None else (-p, None)

    def product(self):
        start = self.peek()
        p, iv = self.power()
        while self.peek().kind == "op" and self.peek().value in "*/":
            op = self.take()
            q, jv = self.power()
            if op.value == "/":
                if jv is not None or not q.is_constant() or q.is_zero():
                    self.fail("can only divide by a nonzero number", op)
                p = p * (1 / q.constant_value())
                continue
            if iv is not None and jv is not None:
                self.fail("a term may contain at most one interval", start)
            p = p * q
            iv = iv if iv is not None else jv
        return p, iv

    def power(self):
        base = self.atom()
        if self.peek().kind == "op" and self.peek().value == "^":
            op = self.take()
            t = self.take()
            if t.kind != "num" or t.value.denominator != 1:
                self.fail("exponent must be a non-negative integer", t)
            p, iv = base
            if iv is not None:
                self.fail("intervals cannot be raised to powers", op)
            return p ** int(t.value), None
        return base

    def atom(self):
        t = self.take()
        if t.kind == "num":
            return Polynomial.constant(self.gens, t.value), None
        if t.kind == "name":
            if t.value not in self.gens:
                self.fail(f"undeclared identifier {t.value!r}", t)
            return Polynomial.var(self.gens, t.value), None
        if t.kind == "interval":
            return Polynomial.constant(self.gens, 1), t.value
        if t.kind == "op" and t.value == "(":
            terms = self.sum()
            close = self.take()
            if close.kind != "op" or close.value != ")":
                self.fail("expected ')'", close)
            if any(iv is not None for _, iv in terms):
                self.fail("intervals cannot appear inside parentheses", t)
            total = Polynomial.zero(self.gens)
            for p, _ in terms:
                total = total + p
            return total, None
        self.fail(f"unexpected {t.value!r}", t)


def parse_expression(text: str, gens, line: int = 1, col: int = 1):
    """Parse a polynomial; returns a Polynomial or, if intervals occur, an IntervalPolynomial."""
    gens = tuple(gens)
    terms = _Expr(_Lexer(text, line, col).tokens(), gens).parse()
    if all(iv is None for _, iv in terms):
        total = Polynomial.zero(gens)
        for p, _ in terms:
            total = total + p
        return total
    out = []
    for p, iv in terms:
        if iv is None:
            for m, c in p.terms.items():
                out.append((Interval.point(c), m))
            continue
        if len(p.terms) != 1:
            raise ParseError("an interval must multiply a single monomial", line, col)
        (m, c), = p.terms.items()
        out.append((iv.scale(c), m))
    return IntervalPolynomial(gens, out)


def parse_polynomial(text: str, gens) -> Polynomial:
    p = parse_expression(text, gens)
    if isinstance(p, IntervalPolynomial):
        raise ParseError("interval coefficients are not allowed here")
    return p


# ---------------------------------------------------------------------------
# statements
# ---------------------------------------------------------------------------

_ORDER = re.compile(r"^\s*(lex|grevlex)\s*\(([^)]*)\)\s*$")


def _statements(text: str):
    """Yield (keyword, body, line, col of body) for each ``;``-terminated statement."""
    clean = []
    for raw in text.splitlines():
        k = raw.find("#")
        clean.append(raw if k < 0 else raw[:k] + " " * (len(raw) - k))
    src = "\n".join(clean)
    i = 0
    line, col = 1, 1
    while i < len(src):
        j = src.find(";", i)
        chunk = src[i:] if j < 0 else src[i:j]
        lead = len(chunk) - len(chunk.lstrip())
        if chunk.strip():
            start = i + lead
            sl = src.count("\n", 0, start) + 1
            sc = start - (src.rfind("\n", 0, start) + 1) + 1
            if j < 0:
                raise ParseError("missing ';'", sl, sc)
            m = re.match(r"[A-Za-z_]+", src[start:j])
            if not m:
                raise ParseError("expected a statement keyword", sl, sc)
            kw = m.group()
            body_start = start + len(kw)
            yield kw, src[body_start:j], sl, sc + len(kw)
        if j < 0:
            break
        i = j + 1


def _offset_position(body: str, offset: int, line: int, col: int) -> tuple[int, int]:
    """Line and column of ``body[offset]`` given the position of ``body[0]``."""
    nl = body.count("\n", 0, offset)
    if nl == 0:
        return line, col + offset
    return line + nl, offset - body.rfind("\n", 0, offset)


def _names(body: str, line: int, col: int) -> list[tuple[str, int, int]]:
    """Comma-separated identifiers with the position of each."""
    out = []
    start = 0
    for piece in body.split(","):
        n = piece.strip()
        at = start + (piece.find(n) if n else 0)
        ln, cn = _offset_position(body, at, line, col)
        if not _NAME.fullmatch(n):
            raise ParseError(f"bad identifier {n!r}", ln, cn)
        out.append((n, ln, cn))
        start += len(piece) + 1
    return out


def _box_statement(body: str, line: int, col: int) -> tuple[str, Interval]:
    m = re.match(r"^\s*([A-Za-z_][A-Za-z_0-9]*)\s+in\s+(.*)$", body, re.S)
    if not m:
        raise ParseError("expected 'name in interval'", line, col)
    toks = _Lexer(m.group(2), line, col).tokens()
    if len(toks) != 2 or toks[0].kind != "interval":
        raise ParseError("expected an interval", line, col)
    return m.group(1), toks[0].value


def parse_problem(text: str) -> ProblemFile:
    """Parse a problem file; errors carry line and column."""
    pf = ProblemFile()
    pending = []
    declared: set = set()
    order_vars = None
    porder_vars = None
    for kw, body, line, col in _statements(text):
        if kw in ("vars", "params"):
            names = []
            for n, ln, cn in _names(body, line, col):
                if n in declared:
                    raise ParseError(f"duplicate identifier {n!r}", ln, cn)
                declared.add(n)
                names.append(n)
            if kw == "vars":
                pf.variables += tuple(names)
            else:
                pf.parameters += tuple(names)
        elif kw in ("order", "porder"):
            m = _ORDER.match(body)
            if not m:
                raise ParseError("expected lex(...) or grevlex(...)", line, col)
            names = [n.strip() for n in m.group(2).split(">")] if m.group(2).strip() else []
            if kw == "order":
                pf.order_kind, order_vars = m.group(1), (names, line, col)
            else:
                pf.porder_kind, porder_vars = m.group(1), (names, line, col)
        elif kw in ("poly", "divisor", "box", "eps", "fuzzy", "sign"):
            pending.append((kw, body, line, col))
        else:
            raise ParseError(f"unknown statement {kw!r}", line, col)

    def reorder(current, spec, what):
        if spec is None:
            return current
        names, line, col = spec
        if not names:
            return current
        if sorted(names) != sorted(current):
            raise ParseError(f"{what} order must list exactly the declared {what}s", line, col)
        return tuple(names)

    pf.variables = reorder(pf.variables, order_vars, "variable")
    pf.parameters = reorder(pf.parameters, porder_vars, "parameter")
    if not pf.variables:
        raise ParseError("no variables declared")
    gens = pf.gens
    for kw, body, line, col in pending:
        if kw == "poly":
            p = parse_expression(body, gens, line, col)
            if isinstance(p, IntervalPolynomial) and pf.parameters:
                if any(any(m[len(pf.variables):]) for _, m in p.terms):
                    raise ParseError("interval polynomials cannot contain parameters", line, col)
                p = IntervalPolynomial(pf.variables, [(iv, m[:len(pf.variables)]) for iv, m in p.terms])
            pf.polys.append(p)
        elif kw == "divisor":
            g = parse_expression(body, gens, line, col)
            if isinstance(g, IntervalPolynomial) or set(g.used_vars()) & set(pf.parameters):
                raise ParseError("divisor must be an exact polynomial in the variables", line, col)
            pf.divisor = g.to_ring(pf.variables)
        elif kw == "box":
            name, iv = _box_statement(body, line, col)
            if name not in pf.parameters:
                raise ParseError(f"box for undeclared parameter {name!r}", line, col)
            pf.boxes[name] = iv
        elif kw == "fuzzy":
            name, iv = _box_statement(body, line, col)
            if name not in pf.parameters:
                raise ParseError(f"fuzzy parameter {name!r} is not declared", line, col)
            pf.fuzzy = (name, iv)
        elif kw == "sign":
            name, iv = _box_statement(body, line, col)
            if name not in pf.variables:
                raise ParseError(f"sign constraint on undeclared variable {name!r}", line, col)
            pf.signs[name] = iv
        elif kw == "eps":
            vals = []
            for part in body.split(","):
                part = part.strip()
                if not _NUMBER.fullmatch(part):
                    raise ParseError(f"bad epsilon {part!r}", line, col)
                vals.append(_number(part))
            pf.eps = vals
    if not pf.polys:
        raise ParseError("no polynomials given")
    return pf


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

def render_problem(pf: ProblemFile) -> str:
    """Canonical text form; ``parse_problem(render_problem(p))`` reproduces ``p``."""
    lines = [f"vars {', '.join(pf.variables)};"]
    if pf.parameters:
        lines.append(f"params {', '.join(pf.parameters)};")
    lines.append(f"order {pf.order_kind}({' > '.join(pf.variables)});")
    if pf.parameters:
        lines.append(f"porder {pf.porder_kind}({' > '.join(pf.parameters)});")
    for p in pf.polys:
        if isinstance(p, IntervalPolynomial):
            lines.append(f"poly {p.format(pf.order)};")
        else:
            lines.append(f"poly {p.format()};")
    for n, iv in pf.boxes.items():
        lines.append(f"box {n} in {iv};")
    if pf.divisor is not None:
        lines.append(f"divisor {pf.divisor.format(pf.order)};")
    if pf.eps:
        lines.append("eps " + ", ".join(str(e) for e in pf.eps) + ";")
    if pf.fuzzy is not None:
        lines.append(f"fuzzy {pf.fuzzy[0]} in {pf.fuzzy[1]};")
    for n, iv in pf.signs.items():
        lines.append(f"sign {n} in {iv};")
    return "\n".join(lines) + "\n"


__all__ = [
    "ParseError",
    "ProblemFile",
    "parse_expression",
    "parse_polynomial",
    "parse_problem",
    "render_problem",
]
