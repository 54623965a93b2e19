"""Truncated derivative sequences ("jets") and their arithmetic.

A jet of order ``N`` at ``t0`` stores the derivative *values*
``(f(t0), Df(t0), ..., D^N f(t0))``, not Taylor coefficients. Products are
therefore Leibniz sums with binomial weights and differentiation is a shift.

Every operation returns a jet whose order is exactly the number of levels it
can justify; reading beyond that raises :class:`InsufficientOrderError`
instead of padding with zeros.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb

from . import scalar as sc
from .errors import (
    BackendMismatchError,
    BasePointMismatchError,
    InsufficientOrderError,
    JetZeroDivisionError,
)

__all__ = [
    "Jet",
    "jet_add",
    "jet_sub",
    "jet_scale",
    "jet_mul",
    "jet_derive",
    "jet_antiderive",
    "jet_powi",
    "jet_reciprocal",
    "bell_partial",
    "bell_table",
    "jet_compose",
    "compose_chain",
]


@dataclass(frozen=True)
class Jet:
    base_point: object
    derivs: tuple
    backend: str = sc.EXACT

    def __post_init__(self):
        sc.check_backend(self.backend)
        if len(self.derivs) == 0:
            raise ValueError("a jet needs at least the value D^0 f(t0)")
        object.__setattr__(self, "base_point", sc.coerce(self.base_point, self.backend))
        object.__setattr__(
            self, "derivs", tuple(sc.coerce(v, self.backend) for v in self.derivs)
        )

    # -- constructors -------------------------------------------------
    @classmethod
    def constant(cls, value, base_point, order: int, backend: str = sc.EXACT) -> "Jet":
        z = sc.zero(backend)
        return cls(base_point, (value,) + (z,) * order, backend)

    @classmethod
    def variable(cls, base_point, order: int, backend: str = sc.EXACT) -> "Jet":
        """Jet of the identity function ``t`` at ``base_point``."""
        z = sc.zero(backend)
        vals = [base_point, sc.one(backend)] + [z] * (order - 1)
        return cls(base_point, tuple(vals[: order + 1]), backend)

    # -- access -------------------------------------------------------
    @property
    def order(self) -> int:
        return len(self.derivs) - 1

    def __getitem__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise IndexError("jet levels are indexed by naturals")
        if k > self.order:
            raise InsufficientOrderError(
                f"D^{k} requested from a jet of order {self.order}"
            )
        return self.derivs[k]

    def __len__(self) -> int:
        return len(self.derivs)

    def __iter__(self):
        return iter(self.derivs)

    def value(self):
        return self.derivs[0]

    def truncate(self, order: int) -> "Jet":
        if order > self.order:
            raise InsufficientOrderError(
                f"cannot extend a jet of order {self.order} to order {order}"
            )
        if order < 0:
            raise ValueError("order must be a natural number")
        return Jet(self.base_point, self.derivs[: order + 1], self.backend)

    def taylor_coefficients(self) -> list:
        """``D^k f(t0) / k!`` for k = 0..order."""
        out, fact = [], 1
        for k, v in enumerate(self.derivs):
            if k:
                fact *= k
            out.append(v / fact)
        return out

    # -- operators ----------------------------------------------------
    def __add__(self, other):
        if isinstance(other, Jet):
            return jet_add(self, other)
        return Jet(self.base_point, (self.derivs[0] + sc.coerce(other, self.backend),) + self.derivs[1:], self.backend)

    __radd__ = __add__

    def __neg__(self):
        return Jet(self.base_point, tuple(-v for v in self.derivs), self.backend)

    def __sub__(self, other):
        if isinstance(other, Jet):
            return jet_sub(self, other)
        return self + (-sc.coerce(other, self.backend))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Jet):
            return jet_mul(self, other)
        return jet_scale(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return jet_mul(self, jet_reciprocal(other))
        c = sc.coerce(other, self.backend)
        if c == 0:
            raise JetZeroDivisionError("division of a jet by zero")
        return jet_scale(self, 1 / c)

    def __rtruediv__(self, other):
        return jet_scale(jet_reciprocal(self), other)

    def __pow__(self, m: int):
        return jet_powi(self, m)


def _check_pair(a: Jet, b: Jet) -> None:
    if a.backend != b.backend:
        raise BackendMismatchError(f"backends differ: {a.backend} vs {b.backend}")
    if a.base_point != b.base_point:
        raise BasePointMismatchError(
            f"base points differ: {a.base_point} vs {b.base_point}"
        )


def jet_add(a: Jet, b: Jet) -> Jet:
    _check_pair(a, b)
    n = min(a.order, b.order)
    return Jet(a.base_point, tuple(a.derivs[k] + b.derivs[k] for k in range(n + 1)), a.backend)


def jet_sub(a: Jet, b: Jet) -> Jet:
    _check_pair(a, b)
    n = min(a.order, b.order)
    return Jet(a.base_point, tuple(a.derivs[k] - b.derivs[k] for k in range(n + 1)), a.backend)


def jet_scale(a: Jet, c) -> Jet:
    c = sc.coerce(c, a.backend)
    return Jet(a.base_point, tuple(c * v for v in a.derivs), a.backend)


def jet_mul(a: Jet, b: Jet) -> Jet:
    """Leibniz product: ``D^n(ab) = sum_k C(n,k) D^k a D^{n-k} b``."""
    _check_pair(a, b)
    n = min(a.order, b.order)
    x, y = a.derivs, b.derivs
    out = []
    for m in range(n + 1):
        acc = sc.zero(a.backend)
        for k in range(m + 1):
            acc += comb(m, k) * x[k] * y[m - k]
        out.append(acc)
    return Jet(a.base_point, tuple(out), a.backend)


def jet_derive(a: Jet, k: int = 1) -> Jet:
    if k < 0:
        raise ValueError("derivation order must be a natural number")
    if k > a.order:
        raise InsufficientOrderError(
            f"cannot take D^{k} of a jet of order {a.order}"
        )
    return Jet(a.base_point, a.derivs[k:], a.backend)


def jet_antiderive(a: Jet, value_at_base) -> Jet:
    """Primitive taking ``value_at_base`` at the base point; order grows by one."""
    return Jet(a.base_point, (value_at_base,) + a.derivs, a.backend)


def jet_reciprocal(a: Jet) -> Jet:
    a0 = a.derivs[0]
    if a0 == 0:
        raise JetZeroDivisionError("reciprocal of a jet with zero constant term")
    inv0 = 1 / a0
    r = [inv0]
    for n in range(1, a.order + 1):
        acc = sc.zero(a.backend)
        for k in range(1, n + 1):
            acc += comb(n, k) * a.derivs[k] * r[n - k]
        r.append(-acc * inv0)
    return Jet(a.base_point, tuple(r), a.backend)


def jet_powi(a: Jet, m: int) -> Jet:
    """Integer power; negative exponents go through one reciprocal."""
    if not isinstance(m, int):
        raise TypeError("jet powers must be integers")
    if m == 0:
        return Jet.constant(sc.one(a.backend), a.base_point, a.order, a.backend)
    if m < 0:
        a = jet_reciprocal(a)
        m = -m
    result = None
    square = a
    while m:
        if m & 1:
            result = square if result is None else jet_mul(result, square)
        m >>= 1
        if m:
            square = jet_mul(square, square)
    return result


@lru_cache(maxsize=512)
def _bell_table_cached(args: tuple, p_max: int):
    # B[n][k] = sum_{i=1}^{n-k+1} C(n-1, i-1) x_i B[n-i][k-1]
    zero = args[0] * 0 if args else 0
    table = [[zero] * (p_max + 1) for _ in range(p_max + 1)]
    table[0][0] = zero + 1
    for n in range(1, p_max + 1):
        for k in range(1, n + 1):
            acc = zero
            for i in range(1, n - k + 2):
                acc += comb(n - 1, i - 1) * args[i - 1] * table[n - i][k - 1]
            table[n][k] = acc
    return table


def bell_table(args, p_max: int):
    """Square table ``B[p][i]`` of partial Bell polynomials for p, i <= p_max."""
    args = tuple(args)
    if len(args) < p_max:
        raise InsufficientOrderError(
            f"Bell table up to p={p_max} needs {p_max} arguments, got {len(args)}"
        )
    return _bell_table_cached(args[:p_max], p_max)


def bell_partial(p: int, i: int, args):
    """Partial exponential Bell polynomial ``B_{p,i}(x_1, x_2, ...)``."""
    if not (1 <= i <= p):
        raise ValueError(f"Bell index out of range: need 1 <= i <= p, got p={p}, i={i}")
    args = tuple(args)
    need = p - i + 1
    if len(args) < need:
        raise InsufficientOrderError(
            f"B_{{{p},{i}}} needs {need} arguments, got {len(args)}"
        )
    # entries beyond x_{p-i+1} never enter B_{p,i}; pad so the table is square
    padded = args[:need] + (args[0] * 0,) * (p - need)
    return bell_table(padded, p)[p][i]


def _check_compose(outer: Jet, inner: Jet) -> int:
    if outer.backend != inner.backend:
        raise BackendMismatchError(f"backends differ: {outer.backend} vs {inner.backend}")
    if outer.base_point != inner.derivs[0]:
        raise BasePointMismatchError(
            "outer jet must be based at the value of the inner jet: "
            f"{outer.base_point} vs {inner.derivs[0]}"
        )
    return min(outer.order, inner.order)


def jet_compose(outer: Jet, inner: Jet) -> Jet:
    """Jet of ``phi o g`` by Faa di Bruno:

    ``D^p(phi o g) = sum_i (D^i phi o g) B_{p,i}(Dg, ..., D^{p-i+1} g)``.
    """
    n = _check_compose(outer, inner)
    out = [outer.derivs[0]]
    if n:
        table = bell_table(inner.derivs[1 : n + 1], n)
        for p in range(1, n + 1):
            acc = sc.zero(outer.backend)
            for i in range(1, p + 1):
                acc += outer.derivs[i] * table[p][i]
            out.append(acc)
    return Jet(inner.base_point, tuple(out), outer.backend)


def compose_chain(outer: Jet, inner: Jet) -> Jet:
    """Composition by the plain chain rule ``D(phi o g) = (D phi o g) Dg``.

    Recursive and independent of the Bell machinery; kept as a cross-check
    for :func:`jet_compose`.
    """
    n = _check_compose(outer, inner)
    if n == 0:
        return Jet(inner.base_point, (outer.derivs[0],), outer.backend)
    inner_low = inner.truncate(n - 1)
    d_outer = Jet(outer.base_point, outer.derivs[1 : n + 1], outer.backend)
    tail = jet_mul(compose_chain(d_outer, inner_low), jet_derive(inner.truncate(n), 1))
    return jet_antiderive(tail, outer.derivs[0])
