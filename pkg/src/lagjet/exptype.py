"""Abel-type binomial identity and series identities for entire functions of
exponential type.

Polynomials give terminating series, so every identity is checked exactly
on them. Exponential combinations ``sum a_i e^{c_i t}`` exercise the
convergent case; there a computed tail bound accompanies each partial sum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from math import comb, factorial

from . import scalar as sc
from .errors import PoleError, RadiusError
from .expr import BinOp, Expc, Neg, Num, Pow, Var

# ---------------------------------------------------------------------------
# polynomials in x, y, z


class MultiPoly:
    """Exact polynomial in ``x, y, z`` keyed by exponent triples."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {k: Fraction(v) for k, v in (terms or {}).items() if v != 0}

    @classmethod
    def constant(cls, c):
        return cls({(0, 0, 0): c})

    @classmethod
    def var(cls, name: str):
        return cls({{"x": (1, 0, 0), "y": (0, 1, 0), "z": (0, 0, 1)}[name]: 1})

    def coeff(self, a: int, b: int, c: int) -> Fraction:
        return self.terms.get((a, b, c), Fraction(0))

    @property
    def degree(self) -> int:
        return max((sum(k) for k in self.terms), default=0)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other):
        other = _as_poly(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return MultiPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        other = _as_poly(other)
        out = {}
        for (a1, b1, c1), v1 in self.terms.items():
            for (a2, b2, c2), v2 in other.terms.items():
                k = (a1 + a2, b1 + b2, c1 + c2)
                out[k] = out.get(k, 0) + v1 * v2
        return MultiPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = MultiPoly.constant(1)
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other):
        return isinstance(other, MultiPoly) and self.terms == other.terms

    def __call__(self, x, y, z):
        return sum(v * x**a * y**b * z**c for (a, b, c), v in self.terms.items())

    def __repr__(self):
        if not self.terms:
            return "MultiPoly(0)"
        parts = [f"{v}*x^{a}*y^{b}*z^{c}" for (a, b, c), v in sorted(self.terms.items())]
        return "MultiPoly(" + " + ".join(parts) + ")"


def _as_poly(v) -> MultiPoly:
    return v if isinstance(v, MultiPoly) else MultiPoly.constant(v)


def _check_lambda(n, lam):
    if lam == int(lam) and -n <= lam <= 0:
        raise PoleError(f"lambda = {lam} is a pole of the identity for n = {n}")


def abel_side(n: int, lam, side: str) -> MultiPoly:
    """Expanded side of the Abel-type identity of order ``n``.

    lhs: ``sum C(n,p)/(p+l) (z + (p+l)x)^p (y - (p+l)x)^{n-p}``
    rhs: ``sum C(n,p)/(p+l) z^p y^{n-p}``
    """
    lam = sc.coerce(lam, sc.EXACT)
    _check_lambda(n, lam)
    x, y, z = (MultiPoly.var(s) for s in "xyz")
    total = MultiPoly()
    for p in range(n + 1):
        c = Fraction(comb(n, p)) / (p + lam)
        if side == "lhs":
            total = total + c * (z + (p + lam) * x) ** p * (y - (p + lam) * x) ** (n - p)
        elif side == "rhs":
            total = total + c * z**p * y ** (n - p)
        else:
            raise ValueError("side must be 'lhs' or 'rhs'")
    return total


# ---------------------------------------------------------------------------
# entire functions of exponential type


@dataclass(frozen=True)
class ExpTypeFn:
    """Either a polynomial ``sum c_k t^k`` or ``sum a_i e^{c_i t}``."""

    poly: tuple = None
    exps: tuple = None

    def __post_init__(self):
        if (self.poly is None) == (self.exps is None):
            raise ValueError("give exactly one of poly / exps")
        if self.poly is not None:
            coeffs = [Fraction(c) for c in self.poly]
            while len(coeffs) > 1 and coeffs[-1] == 0:
                coeffs.pop()
            object.__setattr__(self, "poly", tuple(coeffs))
        else:
            object.__setattr__(
                self, "exps", tuple((Fraction(a), Fraction(c)) for a, c in self.exps)
            )

    @classmethod
    def polynomial(cls, coeffs):
        return cls(poly=tuple(coeffs))

    @classmethod
    def exponential(cls, *terms):
        """``exponential((a1, c1), (a2, c2), ...)`` is ``sum a_i e^{c_i t}``."""
        return cls(exps=tuple(terms))

    @classmethod
    def expc(cls, c, amplitude=1):
        return cls(exps=((amplitude, c),))

    @property
    def is_polynomial(self) -> bool:
        return self.poly is not None

    @property
    def degree(self) -> int:
        return len(self.poly) - 1

    def deriv(self, p: int, at):
        """``D^p f(at)``; exact for polynomials at rational points."""
        if self.is_polynomial:
            total = 0 * at
            for k in range(len(self.poly) - 1, p - 1, -1):
                total = total * at + self.poly[k] * (factorial(k) // factorial(k - p))
            return total
        at = float(at)
        return sum(float(a) * float(c) ** p * math.exp(float(c) * at) for a, c in self.exps)

    def __call__(self, at):
        return self.deriv(0, at)

    def growth_constants(self, K=None):
        """``(C, K)`` with ``|D^n f(0)| <= C K^n`` for every ``n``."""
        if self.is_polynomial:
            K = 1.0 if K is None else float(K)
            if K <= 0:
                raise ValueError("K must be positive")
            C = max(abs(float(self.poly[n])) * factorial(n) / K**n for n in range(len(self.poly)))
            return max(C, 0.0), K
        K_min = max(abs(float(c)) for _, c in self.exps)
        K = K_min if K is None else float(K)
        if K < K_min:
            raise ValueError(f"K must be at least max |c_i| = {K_min}")
        return sum(abs(float(a)) for a, _ in self.exps), K

    # algebra used by the level lemmas
    def derivative(self, q: int = 1) -> "ExpTypeFn":
        if self.is_polynomial:
            coeffs = [self.poly[k] * (factorial(k) // factorial(k - q)) for k in range(q, len(self.poly))]
            return ExpTypeFn.polynomial(coeffs or [0])
        return ExpTypeFn(exps=tuple((a * c**q, c) for a, c in self.exps))

    def __mul__(self, other: "ExpTypeFn") -> "ExpTypeFn":
        if self.is_polynomial and other.is_polynomial:
            out = [Fraction(0)] * (len(self.poly) + len(other.poly) - 1)
            for i, a in enumerate(self.poly):
                for j, b in enumerate(other.poly):
                    out[i + j] += a * b
            return ExpTypeFn.polynomial(out)
        if not self.is_polynomial and not other.is_polynomial:
            terms = {}
            for a1, c1 in self.exps:
                for a2, c2 in other.exps:
                    terms[c1 + c2] = terms.get(c1 + c2, 0) + a1 * a2
            return ExpTypeFn(exps=tuple((a, c) for c, a in terms.items()))
        raise TypeError("products of polynomials with exponentials are outside this class")

    @classmethod
    def from_expr(cls, e) -> "ExpTypeFn":
        """Recognise a polynomial in ``t`` or a rational combination of ``expc`` terms."""
        poly = _expr_polynomial(e)
        if poly is not None:
            return cls.polynomial(poly)
        exps = _expr_exponentials(e)
        if exps is not None:
            return cls(exps=tuple((a, c) for c, a in exps.items() if a != 0))
        raise ValueError("expression is neither a polynomial nor a combination of expc terms")


def _expr_polynomial(e):
    def add(a, b, sign=1):
        out = [Fraction(0)] * max(len(a), len(b))
        for i, v in enumerate(a):
            out[i] += v
        for i, v in enumerate(b):
            out[i] += sign * v
        return out

    def mul(a, b):
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                out[i + j] += x * y
        return out

    def go(node):
        if isinstance(node, Num):
            return [node.value]
        if isinstance(node, Var):
            return [Fraction(0), Fraction(1)]
        if isinstance(node, Neg):
            inner = go(node.operand)
            return None if inner is None else [-v for v in inner]
        if isinstance(node, Pow):
            b = go(node.base)
            if b is None or node.exponent < 0:
                return None
            out = [Fraction(1)]
            for _ in range(node.exponent):
                out = mul(out, b)
            return out
        if isinstance(node, BinOp):
            a, b = go(node.left), go(node.right)
            if a is None or b is None:
                return None
            if node.op == "+":
                return add(a, b)
            if node.op == "-":
                return add(a, b, -1)
            if node.op == "*":
                return mul(a, b)
            if any(b[1:]) or b[0] == 0:
                return None
            return [v / b[0] for v in a]
        return None

    return go(e)


def _expr_exponentials(e):
    """``{rate: amplitude}`` for rational combinations of ``expc`` terms."""

    def go(node):
        if isinstance(node, Expc):
            return {node.freq: Fraction(1)}
        if isinstance(node, Num):
            return {Fraction(0): node.value}
        if isinstance(node, Neg):
            inner = go(node.operand)
            return None if inner is None else {c: -a for c, a in inner.items()}
        if isinstance(node, BinOp):
            a, b = go(node.left), go(node.right)
            if a is None or b is None:
                return None
            if node.op in "+-":
                s = 1 if node.op == "+" else -1
                out = dict(a)
                for c, v in b.items():
                    out[c] = out.get(c, 0) + s * v
                return out
            if node.op == "*":
                out = {}
                for c1, a1 in a.items():
                    for c2, a2 in b.items():
                        out[c1 + c2] = out.get(c1 + c2, 0) + a1 * a2
                return out
            if set(b) == {Fraction(0)} and b[Fraction(0)] != 0:
                return {c: v / b[Fraction(0)] for c, v in a.items()}
            return None
        if isinstance(node, Pow):
            b = go(node.base)
            if b is None or node.exponent < 0:
                return None
            out = {Fraction(0): Fraction(1)}
            for _ in range(node.exponent):
                out = go_mul(out, b)
            return out
        return None

    def go_mul(a, b):
        out = {}
        for c1, a1 in a.items():
            for c2, a2 in b.items():
                out[c1 + c2] = out.get(c1 + c2, 0) + a1 * a2
        return out

    return go(e)


# ---------------------------------------------------------------------------
# the domain A = {x : e K |x| exp(K |x|) <= 1}

@lru_cache(maxsize=1)
def _unit_radius() -> float:
    lo, hi = 0.0, 1.0 / math.e  # e*r*exp(r) - 1 changes sign on [lo, hi]
    while hi - lo > 1e-15 * hi:
        mid = 0.5 * (lo + hi)
        if math.e * mid * math.exp(mid) > 1.0:
            hi = mid
        else:
            lo = mid
    return lo


def domain_A_radius(K: float) -> float:
    """Radius ``r*`` of ``A``, solving ``e K r exp(K r) = 1`` by bisection."""
    if not K > 0:
        raise ValueError("K must be positive")
    return _unit_radius() / K


def in_domain_A(x, K: float) -> bool:
    ax = abs(float(x))
    return math.e * K * ax * math.exp(K * ax) <= 1.0


def _check_A(f: ExpTypeFn, x):
    _, K = f.growth_constants()
    if not in_domain_A(x, K):
        raise RadiusError(
            f"x = {x} lies outside the domain A (radius {domain_A_radius(K):.6g} for K = {K})"
        )
    return K


def _pole_distance(lam, start: int) -> float:
    lam = float(lam)
    span = int(abs(lam)) + 2
    return min(abs(p + lam) for p in range(start, start + span + 1))


def _check_no_pole(lam):
    lam = Fraction(lam)
    if lam.denominator == 1 and lam <= 0:
        raise PoleError(f"lambda = {lam} hits a pole 1/(p + lambda)")


@dataclass(frozen=True)
class SeriesCheck:
    lhs: object
    rhs: object
    tail_bound: float

    @property
    def abs_err(self) -> float:
        return abs(float(self.lhs) - float(self.rhs))


def _log_abs_pow(base: float, p: int):
    """``(sign, log|base^p|)`` with ``0^0 = 1``; ``log`` is ``-inf`` for a zero power."""
    if p == 0:
        return 1.0, 0.0
    if base == 0:
        return 0.0, -math.inf
    sign = -1.0 if (base < 0 and p % 2) else 1.0
    return sign, p * math.log(abs(base))


def _weighted_deriv(f: "ExpTypeFn", p: int, at: float, sign: float, log_w: float) -> float:
    """``w D^p f(at)`` for ``w = sign e^{log_w}``, summed termwise in log space."""
    if sign == 0:
        return 0.0
    total = 0.0
    for a, c in f.exps:
        cs, lc = _log_abs_pow(float(c), p)
        if cs == 0:
            continue
        total += float(a) * sign * cs * math.exp(log_w + lc + float(c) * at)
    return total


def _terms_needed(K: float, x: float, z: float = 0.0, floor: int = 40) -> int:
    """Enough terms that both ``q^P`` and ``(K|z|)^P/P!`` drop below ~1e-18."""
    q = math.e * K * abs(x) * math.exp(K * abs(x))
    P = floor
    if 0 < q < 1:
        P = max(P, math.ceil(math.log(1e-18 * (1 - q)) / math.log(q)) + 5)
    P = max(P, math.ceil(2 * math.e * K * abs(z)) + floor)
    return min(P, 20000)


def exp_type_series(f: ExpTypeFn, x, y, z, lam, terms: int | None = None) -> SeriesCheck:
    """Partial sums of

    ``sum 1/(p+l) (z+(p+l)x)^p/p! D^p f(y-(p+l)x)`` and
    ``sum 1/(p+l) z^p/p! D^p f(y)``

    over ``p < terms`` plus a bound on ``|lhs - rhs|`` from the neglected tails.
    Polynomials give finite sums evaluated exactly; ``terms`` defaults to a
    count chosen from the geometric ratio of the tail.
    """
    _check_no_pole(lam)
    if f.is_polynomial:
        x, y, z, lam = (sc.coerce(v, sc.EXACT) for v in (x, y, z, lam))
        terms = f.degree + 1
        lhs = rhs = Fraction(0)
        for p in range(terms):
            s = p + lam
            lhs += (z + s * x) ** p / (s * factorial(p)) * f.deriv(p, y - s * x)
            rhs += z**p / (s * factorial(p)) * f.deriv(p, y)
        return SeriesCheck(lhs, rhs, 0.0)

    K = _check_A(f, x)
    C, _ = f.growth_constants()
    x, y, z, lam = (float(v) for v in (x, y, z, lam))
    if terms is None:
        terms = _terms_needed(K, x, z)
    lhs = rhs = 0.0
    for p in range(terms):
        s = p + lam
        base = -math.lgamma(p + 1) - math.log(abs(s))
        ssign = 1.0 if s > 0 else -1.0
        sg, lg = _log_abs_pow(z + s * x, p)
        lhs += _weighted_deriv(f, p, y - s * x, ssign * sg, base + lg)
        sg, lg = _log_abs_pow(z, p)
        rhs += _weighted_deriv(f, p, y, ssign * sg, base + lg)
    return SeriesCheck(lhs, rhs, _series_tail(C, K, x, y, z, lam, terms))


def _series_tail(C, K, x, y, z, lam, P) -> float:
    d = _pole_distance(lam, P)
    if d == 0:
        return math.inf
    # rhs terms: |z|^p/(p!|p+l|) |D^p f(y)| <= C e^{K|y|} (K|z|)^p / (p! |p+l|)
    rhs_tail = C * math.exp(K * abs(y)) / d * _power_over_factorial(K * abs(z), P) * math.exp(K * abs(z))
    if x == 0:
        return 2 * rhs_tail
    return min(_lhs_tail_shifted(C, K, x, y, z, lam, P, d), _lhs_tail_split(C, K, x, y, z, lam, P, d)) + rhs_tail


def _power_over_factorial(a: float, P: int) -> float:
    if a == 0:
        return 1.0 if P == 0 else 0.0
    return math.exp(P * math.log(a) - math.lgamma(P + 1))


def _lhs_tail_shifted(C, K, x, y, z, lam, P, d) -> float:
    # |z+(p+l)x|^p <= (p|x|)^p exp(|z+lx|/|x|) and Stirling p! >= p^p e^{-p} sqrt(2 pi p):
    #   term_p <= A q^p / (|p+l| sqrt(2 pi p)),  q = e K|x| exp(K|x|)
    log_A = math.log(C) + K * abs(y - lam * x) + abs(z + lam * x) / abs(x) if C else -math.inf
    if log_A > 700:
        return math.inf
    A = math.exp(log_A)
    q = math.e * K * abs(x) * math.exp(K * abs(x))
    Pp = max(P, 1)
    if q < 1.0:
        return A * q**Pp / (d * math.sqrt(2 * math.pi * Pp) * (1.0 - q))
    if Pp > 2 * abs(lam) + 1:
        # |p+l| >= p/2 and sum_{p>=P} p^{-3/2} <= 2/sqrt(P-1)
        return A * (2 / math.sqrt(2 * math.pi)) * 2 / math.sqrt(Pp - 1)
    return math.inf


def _lhs_tail_split(C, K, x, y, z, lam, P, d) -> float:
    # (a+b)^p <= 2^{p-1}(a^p + b^p) with a = |z + l x|, b = p|x|, then
    # e^{K|y-(p+l)x|} <= e^{K|y-lx|} e^{Kp|x|} and Stirling on (Kp|x|)^p/p!
    a = abs(z + lam * x)
    grow = math.exp(K * abs(x))
    w = 2 * K * a * grow
    q2 = 2 * math.e * K * abs(x) * grow
    if q2 >= 1.0:
        return math.inf
    Pp = max(P, 1)
    head = C * math.exp(K * abs(y - lam * x)) / (2 * d)
    return head * (_power_over_factorial(w, Pp) * math.exp(w) + q2**Pp / (math.sqrt(2 * math.pi * Pp) * (1 - q2)))


def exp_type_shift(f: ExpTypeFn, lam, x, terms: int | None = None):
    """``(f(l x), f(0) + l sum_{p>=1} (l-p)^{p-1} x^p/p! D^p f(p x))``."""
    if f.is_polynomial:
        lam, x = sc.coerce(lam, sc.EXACT), sc.coerce(x, sc.EXACT)
        acc = 0 * x
        for p in range(1, f.degree + 1):
            acc += sc.ipow(lam - p, p - 1) * x**p / factorial(p) * f.deriv(p, p * x)
        return f(lam * x), f.deriv(0, 0 * x) + lam * acc
    K = _check_A(f, x)
    lam, x = float(lam), float(x)
    if terms is None:
        terms = _terms_needed(K, x)
    acc = 0.0
    for p in range(1, terms + 1):
        s1, l1 = _log_abs_pow(lam - p, p - 1)
        s2, l2 = _log_abs_pow(x, p)
        acc += _weighted_deriv(f, p, p * x, s1 * s2, l1 + l2 - math.lgamma(p + 1))
    return f(lam * x), f(0.0) + lam * acc


def exp_type_deriv0(f: ExpTypeFn, m: int, x, terms: int | None = None):
    """``(D^m f(0)/m!, sum_{p>=m} C(p-1,m-1) (-1)^{p-m} p^{p-m}/p! x^{p-m} D^p f(p x))``."""
    if m < 1:
        raise ValueError("m must be >= 1")
    if f.is_polynomial:
        x = sc.coerce(x, sc.EXACT)
        rhs = 0 * x
        for p in range(m, f.degree + 1):
            sign = -1 if (p - m) % 2 else 1
            weight = sign * comb(p - 1, m - 1) * Fraction(p ** (p - m), factorial(p))
            rhs += weight * sc.ipow(x, p - m) * f.deriv(p, p * x)
        return f.deriv(m, 0 * x) / factorial(m), rhs
    K = _check_A(f, x)
    x = float(x)
    if terms is None:
        terms = _terms_needed(K, x)
    rhs = 0.0
    for p in range(m, m + terms + 1):
        k = p - m
        sx, lx = _log_abs_pow(-x, k)
        log_w = math.log(comb(p - 1, m - 1)) + k * math.log(p) - math.lgamma(p + 1) + lx
        rhs += _weighted_deriv(f, p, p * x, sx, log_w)
    return f.deriv(m, 0.0) / factorial(m), rhs
