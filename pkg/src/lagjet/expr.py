"""A small expression language for functions of one variable ``t``.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | factor
    factor := base ('^' intlit)?
    base   := ratlit | 't' | ident '(' args ')' | '(' expr ')'
    ratlit := int ('/' int)?
    ident  := exp | log | sin | cos | sqrt | expc

``expc(c)`` is ``e^{c t}`` with a rational literal frequency ``c``. Parsed
expressions compile to jets of any order through :func:`jet_from_expr`.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction

from . import scalar as sc
from .errors import DomainError, NonRationalError, ParseError
from .jet import Jet, jet_compose, jet_mul, jet_powi, jet_reciprocal

FUNCTIONS = ("exp", "log", "sin", "cos", "sqrt", "expc")


@dataclass(frozen=True)
class Span:
    start: int
    end: int
    line: int
    column: int


def _span():
    return field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Num:
    value: Fraction
    decimal: bool = False
    span: Span | None = _span()


@dataclass(frozen=True)
class Var:
    span: Span | None = _span()


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * /
    left: object
    right: object
    span: Span | None = _span()


@dataclass(frozen=True)
class Neg:
    operand: object
    span: Span | None = _span()


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: int
    span: Span | None = _span()


@dataclass(frozen=True)
class Call:
    name: str
    arg: object
    span: Span | None = _span()


@dataclass(frozen=True)
class Expc:
    """``e^{freq * t}``."""

    freq: Fraction
    span: Span | None = _span()


# ---------------------------------------------------------------------------
# tokenizer

_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r\n]+)|(?P<num>\d+(?:\.\d*)?|\.\d+)|(?P<ident>[A-Za-z_]\w*)|(?P<op>[-+*/^(),])"
)


@dataclass
class _Tok:
    kind: str
    text: str
    pos: int
    line: int
    column: int


def _tokenize(src: str) -> list[_Tok]:
    toks = []
    pos, line, line_start = 0, 1, 0
    while pos < len(src):
        m = _TOKEN_RE.match(src, pos)
        if m is None:
            raise ParseError(f"unexpected character {src[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        text = m.group()
        if kind == "ws":
            for i, ch in enumerate(text):
                if ch == "\n":
                    line += 1
                    line_start = pos + i + 1
        else:
            toks.append(_Tok(kind, text, pos, line, pos - line_start + 1))
        pos = m.end()
    toks.append(_Tok("eof", "", pos, line, pos - line_start + 1))
    return toks


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.toks = _tokenize(src)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def peek(self, offset=1) -> _Tok:
        return self.toks[min(self.i + offset, len(self.toks) - 1)]

    def advance(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, message, tok=None):
        tok = tok or self.tok
        return ParseError(message, tok.line, tok.column)

    def expect(self, text):
        if self.tok.text != text:
            found = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        return self.advance()

    def span(self, start_tok: _Tok) -> Span:
        end = self.toks[self.i - 1]
        return Span(start_tok.pos, end.pos + len(end.text), start_tok.line, start_tok.column)

    # -- grammar ------------------------------------------------------
    def parse(self):
        node = self.expr()
        if self.tok.kind != "eof":
            raise self.error(f"unexpected {self.tok.text!r}")
        return node

    def expr(self):
        start = self.tok
        node = self.term()
        while self.tok.text in ("+", "-"):
            op = self.advance().text
            node = BinOp(op, node, self.term(), span=self.span(start))
        return node

    def term(self):
        start = self.tok
        node = self.unary()
        while self.tok.text in ("*", "/"):
            op = self.advance().text
            node = BinOp(op, node, self.unary(), span=self.span(start))
        return node

    def unary(self):
        if self.tok.text == "-":
            start = self.advance()
            return Neg(self.unary(), span=self.span(start))
        return self.factor()

    def factor(self):
        start = self.tok
        node = self.base()
        if self.tok.text == "^":
            self.advance()
            node = Pow(node, self.exponent(), span=self.span(start))
        return node

    def exponent(self) -> int:
        tok = self.tok
        if tok.text == "(":
            self.advance()
            value = self.signed_int(tok)
            if self.tok.text != ")":
                raise self.error("non-integer exponent", tok)
            self.advance()
        else:
            value = self.signed_int(tok)
        if self.tok.text == "^":
            # right associative; the exponent tower folds to one integer
            self.advance()
            inner = self.exponent()
            if inner < 0:
                raise self.error("non-integer exponent", tok)
            value = value**inner
        return value

    def signed_int(self, err_tok) -> int:
        sign = 1
        if self.tok.text == "-":
            self.advance()
            sign = -1
        if self.tok.kind != "num" or not self.tok.text.isdigit():
            raise self.error("non-integer exponent", err_tok)
        value = sign * int(self.advance().text)
        if self.tok.text == "/":
            raise self.error("non-integer exponent", err_tok)
        return value

    def base(self):
        tok = self.tok
        if tok.kind == "num":
            return self.ratlit()
        if tok.kind == "ident":
            if tok.text == "t":
                self.advance()
                return Var(span=self.span(tok))
            if tok.text not in FUNCTIONS:
                raise self.error(f"unknown function {tok.text!r}")
            self.advance()
            self.expect("(")
            if tok.text == "expc":
                freq = self.signed_ratlit()
                self.expect(")")
                return Expc(freq, span=self.span(tok))
            arg = self.expr()
            if self.tok.text == ",":
                raise self.error(f"{tok.text} takes one argument")
            self.expect(")")
            return Call(tok.text, arg, span=self.span(tok))
        if tok.text == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        found = tok.text or "end of input"
        raise self.error(f"unexpected {found!r}")

    def ratlit(self) -> Num:
        tok = self.advance()
        decimal = not tok.text.isdigit()
        value = Fraction(tok.text)
        if not decimal and self.tok.text == "/" and self.peek().kind == "num" and self.peek().text.isdigit():
            self.advance()
            den = int(self.advance().text)
            if den == 0:
                raise self.error("zero denominator in rational literal", tok)
            value = value / den
        return Num(value, decimal, span=self.span(tok))

    def signed_ratlit(self) -> Fraction:
        tok = self.tok
        sign = 1
        if self.tok.text == "-":
            self.advance()
            sign = -1
        if self.tok.kind != "num":
            raise self.error("expc expects a rational literal frequency", tok)
        num = self.ratlit()
        return sign * num.value


def parse(src: str):
    """Parse ``src`` into an expression tree."""
    return _Parser(src).parse()


# ---------------------------------------------------------------------------
# printing

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def _num_text(value: Fraction) -> str:
    text = str(value)
    return f"({text})" if value < 0 else text


def to_source(node) -> str:
    """Render an expression so that ``parse(to_source(e)) == e``."""
    text, _ = _render(node)
    return text


def _render(node):
    """Return ``(text, precedence)``; atoms get precedence 5."""
    if isinstance(node, Num):
        if node.decimal:
            return _decimal_text(node.value), 5
        if node.value.denominator != 1:
            return f"({_num_text(node.value)})" if node.value < 0 else str(node.value), 4
        return _num_text(node.value), 5
    if isinstance(node, Var):
        return "t", 5
    if isinstance(node, Expc):
        return f"expc({node.freq})", 5
    if isinstance(node, Call):
        return f"{node.name}({to_source(node.arg)})", 5
    if isinstance(node, Pow):
        base, prec = _render(node.base)
        if prec < 5:
            base = f"({base})"
        return f"{base}^{node.exponent}", 4
    if isinstance(node, Neg):
        inner, prec = _render(node.operand)
        if prec < 3:
            inner = f"({inner})"
        return f"-{inner}", 3
    if isinstance(node, BinOp):
        prec = _PREC[node.op]
        left, lp = _render(node.left)
        right, rp = _render(node.right)
        if lp < prec:
            left = f"({left})"
        if rp <= prec:
            right = f"({right})"
        if node.op in "*/" and left[-1].isdigit() and right[0].isdigit():
            # "a/3/2" would re-read the trailing "3/2" as one rational literal
            right = f"({right})"
        sep = f" {node.op} " if prec == 1 else node.op
        return f"{left}{sep}{right}", prec
    raise TypeError(f"not an expression node: {node!r}")


def _decimal_text(value: Fraction) -> str:
    # decimal literals are finite decimals, so some power of ten clears the denominator
    digits = 0
    while (value * 10**digits).denominator != 1:
        digits += 1
    scaled = abs(value * 10**digits).numerator
    sign = "-" if value < 0 else ""
    if digits == 0:
        return f"{sign}{scaled}.0"
    s = str(scaled).rjust(digits + 1, "0")
    return f"{sign}{s[:-digits]}.{s[-digits:]}"


# ---------------------------------------------------------------------------
# evaluation to jets


def jet_from_expr(e, t0, order: int, backend: str = sc.EXACT) -> Jet:
    """Exact derivative values ``D^k e(t0)`` for ``k <= order``.

    On the exact backend transcendental builtins are accepted only where
    their derivatives are rational: ``exp``/``sin``/``cos`` at argument 0,
    ``log`` at 1, ``sqrt`` at a rational square, ``expc(c)`` at ``t0 = 0``.
    """
    sc.check_backend(backend)
    if order < 0:
        raise ValueError("order must be a natural number")
    t0 = sc.coerce(t0, backend)
    return _Evaluator(t0, order, backend).visit(e)


def evaluate(e, x: float) -> float:
    """Float value of ``e`` at ``x``."""
    return jet_from_expr(e, float(x), 0, sc.FLOAT)[0]


class _Evaluator:
    def __init__(self, t0, order, backend):
        self.t0 = t0
        self.order = order
        self.backend = backend

    def const(self, value):
        return Jet.constant(value, self.t0, self.order, self.backend)

    def visit(self, node):
        if isinstance(node, Num):
            if node.decimal and self.backend == sc.EXACT:
                raise NonRationalError(
                    "decimal literals are rejected on the exact backend; write p/q"
                )
            v = node.value if self.backend == sc.EXACT else float(node.value)
            return self.const(v)
        if isinstance(node, Var):
            return Jet.variable(self.t0, self.order, self.backend)
        if isinstance(node, Neg):
            return -self.visit(node.operand)
        if isinstance(node, BinOp):
            a, b = self.visit(node.left), self.visit(node.right)
            if node.op == "+":
                return a + b
            if node.op == "-":
                return a - b
            if node.op == "*":
                return jet_mul(a, b)
            if b[0] == 0:
                raise DomainError(f"division by zero at t = {self.t0}")
            return jet_mul(a, jet_reciprocal(b))
        if isinstance(node, Pow):
            b = self.visit(node.base)
            if node.exponent < 0 and b[0] == 0:
                raise DomainError(f"negative power of zero at t = {self.t0}")
            return jet_powi(b, node.exponent)
        if isinstance(node, Expc):
            return self.expc(node.freq)
        if isinstance(node, Call):
            inner = self.visit(node.arg)
            outer = builtin_jet(node.name, inner[0], self.order, self.backend)
            return jet_compose(outer, inner)
        raise TypeError(f"not an expression node: {node!r}")

    def expc(self, c: Fraction):
        n = self.order
        if self.backend == sc.EXACT:
            if c == 0:
                return self.const(Fraction(1))
            if self.t0 != 0:
                raise NonRationalError(
                    f"expc({c}) at t = {self.t0} is irrational; use the float backend"
                )
            return Jet(self.t0, tuple(c**k for k in range(n + 1)), self.backend)
        cf = float(c)
        base = math.exp(cf * self.t0)
        return Jet(self.t0, tuple(base * cf**k for k in range(n + 1)), self.backend)


def builtin_jet(name: str, at, order: int, backend: str) -> Jet:
    """Jet of a builtin function of one argument, based at ``at``."""
    n = order
    if backend == sc.EXACT:
        return _builtin_exact(name, at, n)
    x = float(at)
    if name == "exp":
        v = math.exp(x)
        vals = [v] * (n + 1)
    elif name == "sin" or name == "cos":
        s, c = math.sin(x), math.cos(x)
        cycle = [s, c, -s, -c] if name == "sin" else [c, -s, -c, s]
        vals = [cycle[k % 4] for k in range(n + 1)]
    elif name == "log":
        if x <= 0:
            raise DomainError(f"log of nonpositive value {x}")
        vals = [math.log(x)] + [
            (-1) ** (k - 1) * math.factorial(k - 1) / x**k for k in range(1, n + 1)
        ]
    elif name == "sqrt":
        vals = _sqrt_derivs(x, n, math.sqrt(x) if x >= 0 else None, float)
    else:
        raise ValueError(f"unknown builtin {name!r}")
    return Jet(at, tuple(vals), backend)


def _builtin_exact(name, at, n):
    at = Fraction(at)

    def refuse():
        raise NonRationalError(
            f"{name} at {at} has irrational derivatives; use the float backend"
        )

    if name == "exp":
        if at != 0:
            refuse()
        vals = [Fraction(1)] * (n + 1)
    elif name in ("sin", "cos"):
        if at != 0:
            refuse()
        cycle = [0, 1, 0, -1] if name == "sin" else [1, 0, -1, 0]
        vals = [Fraction(cycle[k % 4]) for k in range(n + 1)]
    elif name == "log":
        if at <= 0:
            raise DomainError(f"log of nonpositive value {at}")
        if at != 1:
            refuse()
        vals = [Fraction(0)] + [
            Fraction((-1) ** (k - 1) * math.factorial(k - 1)) for k in range(1, n + 1)
        ]
    elif name == "sqrt":
        root = _rational_sqrt(at) if at >= 0 else None
        if at >= 0 and root is None:
            refuse()
        vals = _sqrt_derivs(at, n, root, Fraction)
    else:
        raise ValueError(f"unknown builtin {name!r}")
    return Jet(at, tuple(vals), sc.EXACT)


def _rational_sqrt(q: Fraction):
    a, b = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if a * a == q.numerator and b * b == q.denominator:
        return Fraction(a, b)
    return None


def _sqrt_derivs(x, n, root, kind):
    if x < 0:
        raise DomainError(f"sqrt of negative value {x}")
    if x == 0:
        if n > 0:
            raise DomainError("sqrt is not differentiable at 0")
        return [kind(0)]
    vals = [root]
    falling = kind(1)
    for k in range(1, n + 1):
        falling *= kind(1) / 2 - (k - 1)
        vals.append(falling * root / x**k)
    return vals
