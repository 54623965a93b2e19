"""Lagrange coefficients, the Lagrange product formula, and Lagrange inversion.

The central quantity is the coefficient

    a_n(u, g) = (1/n!) D^{n-1}(u^n Dg)(t),     a_0(u, g) = g(t),

so that ``L_u(g, z)(t) = sum_n a_n z^n``. With ``g = u`` the series solves
``x = t + z u(x)`` through ``x = t + z L_u(u, z)(t)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import comb, factorial

from . import scalar as sc
from .errors import (
    ConvergenceError,
    DivergenceError,
    InsufficientOrderError,
    RadiusError,
)
from .expr import Expc, jet_from_expr
from .jet import Jet, jet_derive, jet_mul, jet_powi

# ---------------------------------------------------------------------------
# truncated power series in z, as coefficient lists


def ser_mul(a, b, order: int) -> list:
    out = []
    for n in range(order + 1):
        acc = 0 * a[0]
        for k in range(max(0, n - len(b) + 1), min(n, len(a) - 1) + 1):
            acc += a[k] * b[n - k]
        out.append(acc)
    return out


def ser_pow(a, m: int, order: int) -> list:
    out = [a[0] * 0 + 1] + [a[0] * 0] * order
    for _ in range(m):
        out = ser_mul(out, a, order)
    return out


def ser_poly(P, a, order: int) -> list:
    """Coefficients of ``P(a(z))`` up to ``z^order``; ``P`` lists ascending coefficients."""
    zero = a[0] * 0
    out = [zero] * (order + 1)
    for c in reversed(list(P)):
        out = ser_mul(out, a, order)
        out[0] += c
    return out


def ser_exp(a, order: int) -> list:
    """``exp(a(z))`` for a series with zero constant term."""
    if a[0] != 0:
        raise ValueError("ser_exp needs a series without constant term")
    out = [a[0] * 0 + 1]
    for n in range(1, order + 1):
        acc = a[0] * 0
        for k in range(1, min(n, len(a) - 1) + 1):
            acc += k * a[k] * out[n - k]
        out.append(acc / n)
    return out


def ser_eval(coeffs, z):
    total = 0 * z
    for c in reversed(list(coeffs)):
        total = total * z + c
    return total


# ---------------------------------------------------------------------------
# coefficients and the product formula


def _need(n: int, *jets: Jet) -> None:
    for j in jets:
        if j.order < n:
            raise InsufficientOrderError(f"coefficient {n} needs jets of order >= {n}, got {j.order}")


def lag_coeff(u: Jet, g: Jet, n: int):
    """``(1/n!) D^{n-1}(u^n Dg)`` at the base point; ``g(t0)`` for ``n = 0``."""
    if n < 0:
        raise ValueError("n must be a natural number")
    _need(n, g)
    if n == 0:
        return g[0]
    _need(n, u)
    un = jet_powi(u.truncate(n - 1), n)
    dg = jet_derive(g.truncate(n), 1)
    return jet_mul(un, dg)[n - 1] / factorial(n)


def compositions(n: int, parts: int):
    """All ``alpha`` in N^parts with ``sum(alpha) == n`` (weak compositions)."""
    if parts == 1:
        yield (n,)
        return
    for first in range(n + 1):
        for rest in compositions(n - first, parts - 1):
            yield (first,) + rest


def product_identity(psi: Jet, factors, n: int):
    """Both sides of the Lagrange product formula for ``f_1 ... f_p``.

    lhs: ``(1/n!) D^{n-1}(psi^n D(f_1...f_p))``
    rhs: ``sum_{alpha in E(n,p)} prod_j (1/alpha_j!) D^{alpha_j - 1}(psi^{alpha_j} D f_j)``
    """
    factors = list(factors)
    if len(factors) < 2:
        raise ValueError("the product formula needs at least two factors")
    _need(n, psi, *factors)
    prod = factors[0].truncate(n)
    for f in factors[1:]:
        prod = jet_mul(prod, f.truncate(n))
    lhs = lag_coeff(psi, prod, n)

    table = [[lag_coeff(psi, f, k) for k in range(n + 1)] for f in factors]
    rhs = sc.zero(psi.backend)
    count = 0
    for alpha in compositions(n, len(factors)):
        term = sc.one(psi.backend)
        for j, a in enumerate(alpha):
            term *= table[j][a]
        rhs += term
        count += 1
    assert count == comb(n + len(factors) - 1, len(factors) - 1)
    return lhs, rhs


@dataclass(frozen=True)
class LagSeries:
    """Coefficients ``a_0..a_order`` of ``L_u(g, z)(t)``."""

    base_point: object
    coeffs: tuple

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, z):
        return ser_eval(self.coeffs, z)


def lag_series(u: Jet, g: Jet, order: int) -> LagSeries:
    _need(order, u, g)
    coeffs = [g[0]]
    dg = jet_derive(g.truncate(order), 1) if order else None
    un = None
    u_low = u.truncate(max(order - 1, 0))
    fact = 1
    for n in range(1, order + 1):
        un = u_low if un is None else jet_mul(un, u_low)
        fact *= n
        coeffs.append(jet_mul(un, dg)[n - 1] / fact)
    return LagSeries(g.base_point, tuple(coeffs))


def jet_poly(P, f: Jet) -> Jet:
    """Jet of ``P(f)`` by Horner's rule."""
    out = Jet.constant(sc.zero(f.backend), f.base_point, f.order, f.backend)
    for c in reversed(list(P)):
        out = jet_mul(out, f) + sc.coerce(c, f.backend)
    return out


def apply_poly(P, s: LagSeries, from_u_g):
    """``(P(L_psi(f)) truncated, L_psi(P(f)))`` as coefficient lists of equal length."""
    psi, f = from_u_g
    N = s.order
    _need(N, psi, f)
    left = ser_poly(P, list(s.coeffs), N)
    right = list(lag_series(psi, jet_poly(P, f.truncate(N)), N).coeffs)
    return left, right


# ---------------------------------------------------------------------------
# inversion of x = t + z u(x)

DIVERGENCE_RUN = 5


@dataclass(frozen=True)
class InversionResult:
    x_series: object
    x_newton: float
    residual: float
    terms: tuple
    certified_radius: float | None = None

    @property
    def error(self) -> float:
        return abs(float(self.x_series) - self.x_newton)


def _check_radius(z, radius):
    if radius is not None and not abs(float(z)) < radius:
        raise RadiusError(f"|z| = {abs(float(z))} is not below the certified radius {radius}")


def _watch_divergence(terms) -> None:
    growing = 0
    prev = None
    for term in terms:
        mag = abs(float(term))
        if prev is not None and mag > prev:
            growing += 1
            if growing >= DIVERGENCE_RUN:
                raise DivergenceError(
                    f"{DIVERGENCE_RUN} consecutive series increments grew in magnitude"
                )
        else:
            growing = 0
        prev = mag


def inversion_terms(u_jet: Jet, z, order: int) -> list:
    """``z^n/n! D^{n-1}(u^n)(t)`` for ``n = 1..order``."""
    if order < 1:
        return []
    s = lag_series(u_jet, u_jet, order - 1)
    return [c * z ** (n + 1) for n, c in enumerate(s.coeffs)]


def invert(u, t, z, order: int, backend: str = sc.FLOAT, radius: float | None = None) -> InversionResult:
    """Solve ``x = t + z u(x)`` by the Lagrange series, cross-checked by Newton.

    ``radius`` is a certified convergence radius; when given, ``|z|`` must lie
    below it. Without one, the partial sums are watched for divergence.
    """
    _check_radius(z, radius)
    t = sc.coerce(t, backend)
    z = sc.coerce(z, backend)
    u_jet = jet_from_expr(u, t, max(order - 1, 0), backend)
    terms = inversion_terms(u_jet, z, order)
    if radius is None:
        _watch_divergence(terms)
    x = t + sum(terms, 0 * z)
    x_newton = newton_oracle(u, float(t), float(z))
    xf = float(x)
    residual = abs(float(t) + float(z) * jet_from_expr(u, xf, 0, sc.FLOAT)[0] - xf)
    return InversionResult(x, x_newton, residual, tuple(terms), radius)


def newton_oracle(u, t: float, z: float, max_iter: int = 100) -> float:
    """Damped Newton iteration for ``x - t - z u(x) = 0`` started at ``x = t``."""
    t, z = float(t), float(z)

    def F(x):
        j = jet_from_expr(u, x, 1, sc.FLOAT)
        return x - t - z * j[0], 1.0 - z * j[1]

    x = t
    fx, dfx = F(x)
    for _ in range(max_iter):
        if abs(fx) <= 1e-14 * max(1.0, abs(x)):
            return x
        if dfx == 0:
            raise ConvergenceError("Newton step hit a zero derivative")
        step = fx / dfx
        for _ in range(60):
            x_new = x - step
            f_new, df_new = F(x_new)
            if abs(f_new) < abs(fx) or abs(f_new) <= 1e-14 * max(1.0, abs(x_new)):
                break
            step *= 0.5
        else:
            break
        x, fx, dfx = x_new, f_new, df_new
    if abs(fx) <= 1e-14 * max(1.0, abs(x)):
        return x
    raise ConvergenceError(f"Newton did not converge: residual {abs(fx):.3e}")


def lag_compose_check(u, g, t, z, order: int, radius: float | None = None) -> float:
    """``|L_u(g, z)(t) - g(t + z L_u(u, z)(t))|`` with float arithmetic."""
    _check_radius(z, radius)
    t, z = float(t), float(z)
    u_jet = jet_from_expr(u, t, order, sc.FLOAT)
    g_jet = jet_from_expr(g, t, order, sc.FLOAT)
    lg = lag_series(u_jet, g_jet, order)(z)
    x = t + z * lag_series(u_jet, u_jet, order)(z)
    return abs(lg - jet_from_expr(g, x, 0, sc.FLOAT)[0])


# ---------------------------------------------------------------------------
# tree function and Lambert W


def tree_coeffs(order: int) -> list:
    """``n^{n-1}/n!`` for ``n = 1..order``, obtained from ``L_{e^t}(t, z)`` at 0."""
    if order <= 0:
        return []
    u = jet_from_expr(Expc(1), 0, order, sc.EXACT)
    g = Jet.variable(0, order, sc.EXACT)
    return list(lag_series(u, g, order).coeffs[1:])


def lambert_w_coeffs(order: int) -> list:
    """Series of ``W(x) = -a(-x)``: ``(-1)^{n-1} n^{n-1}/n!``."""
    return [c if n % 2 else -c for n, c in enumerate(tree_coeffs(order), start=1)]


def tree_functional_defect(order: int) -> list:
    """Coefficients of ``a(z) - z e^{a(z)}`` through ``z^order``; all zero."""
    a = [0] + tree_coeffs(order)
    a = [sc.coerce(c, sc.EXACT) for c in a]
    e = ser_exp(a, order)
    z_e = [a[0] * 0] + e[:order]
    return [a[n] - z_e[n] for n in range(order + 1)]


def lambert_w_defect(order: int) -> list:
    """Coefficients of ``W(x) e^{W(x)} - x`` through ``x^order``; all zero."""
    w = [sc.coerce(0, sc.EXACT)] + [sc.coerce(c, sc.EXACT) for c in lambert_w_coeffs(order)]
    prod = ser_mul(w, ser_exp(w, order), order)
    prod[1] -= 1
    return prod


def tree_value(z: float, order: int = 60) -> float:
    return math.fsum(c * z**n for n, c in enumerate(map(float, tree_coeffs(order)), start=1))
