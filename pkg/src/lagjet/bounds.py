"""Level norms, certified radii and the commutation check.

The level norm of ``g`` on a segment ``J`` is

    N_R(g) = sup_p ||D^p g||_J / (p! R^p).

Closed forms are available for polynomials, ``a e^{ct}``, ``sin`` and ``cos``;
anything else can only be estimated from below on a grid, and such
estimates are never used to assert an inequality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

import numpy as np

from . import scalar as sc
from .errors import BoundViolation, RadiusError
from .expr import Call, Var, jet_from_expr
from .exptype import ExpTypeFn
from .jet import Jet, jet_compose
from .lagrange import jet_poly, lag_series, ser_eval, ser_poly

RTOL = 1e-12


@dataclass(frozen=True)
class Segment:
    a: float
    b: float

    def __post_init__(self):
        if not float(self.a) < float(self.b):
            raise ValueError("a segment needs a < b")

    def contains(self, t) -> bool:
        return float(self.a) <= float(t) <= float(self.b)


@dataclass(frozen=True)
class LevelEstimate:
    R: float
    value: float
    exact: bool
    p_max: int | None = None

    def __post_init__(self):
        if not self.R > 0:
            raise ValueError("R must be positive")
        if self.value < 0:
            raise ValueError("a level norm is non-negative")


# ---------------------------------------------------------------------------
# sup norms of derivatives for the closed-form class


def _poly_sup(coeffs, seg: Segment) -> float:
    """``max |h|`` on the segment for ascending float coefficients."""
    a, b = float(seg.a), float(seg.b)
    h = np.polynomial.Polynomial(coeffs)
    pts = [a, b]
    dh = h.deriv()
    if dh.degree() >= 1:
        pts += [r.real for r in dh.roots() if abs(r.imag) < 1e-12 and a <= r.real <= b]
    return max(abs(h(x)) for x in pts)


def _trig_sup(kind: str, seg: Segment) -> float:
    """``max |sin|`` or ``max |cos|`` on the segment."""
    a, b = float(seg.a), float(seg.b)
    f = math.sin if kind == "sin" else math.cos
    pts = [a, b]
    offset = 0.5 if kind == "sin" else 0.0  # extrema at (k + offset) pi
    k = math.ceil(a / math.pi - offset)
    while (k + offset) * math.pi <= b:
        pts.append((k + offset) * math.pi)
        k += 1
    return max(abs(f(x)) for x in pts)


def _closed_form(g):
    """Normalise ``g`` to an ExpTypeFn or a ``("sin"|"cos", None)`` marker."""
    if isinstance(g, (ExpTypeFn, tuple)):
        return g
    if isinstance(g, Call) and g.name in ("sin", "cos") and isinstance(g.arg, Var):
        return (g.name, None)
    try:
        return ExpTypeFn.from_expr(g)
    except (ValueError, TypeError) as exc:
        raise ValueError(f"no closed-form level for {g!r}") from exc


def derivative_sup(g, p: int, seg: Segment) -> float:
    """``||D^p g||`` on the segment for the closed-form class."""
    g = _closed_form(g)
    if isinstance(g, tuple):
        kinds = ("sin", "cos") if g[0] == "sin" else ("cos", "sin")
        return _trig_sup(kinds[p % 2], seg)
    d = g.derivative(p) if p else g
    if d.is_polynomial:
        return _poly_sup([float(c) for c in d.poly], seg)
    if len(d.exps) != 1:
        raise ValueError("sup norm of a sum of exponentials has no closed form here")
    (amp, c), = d.exps
    return abs(float(amp)) * math.exp(max(float(c) * float(seg.a), float(c) * float(seg.b)))


def level_exact(g, seg: Segment, R) -> LevelEstimate:
    """Closed-form ``N_R(g)`` for polynomials, ``a e^{ct}``, ``sin`` and ``cos``."""
    R = float(R)
    if not R > 0:
        raise ValueError("R must be positive")
    g = _closed_form(g)
    if isinstance(g, tuple):
        # norms alternate between two values; (1/R)^p/p! peaks at floor(1/R)
        top = math.floor(1 / R) + 2
        value = max(derivative_sup(g, p, seg) / (factorial(p) * R**p)
                    for p in range(top + 1))
        return LevelEstimate(R, value, True)
    if g.is_polynomial:
        value = max(derivative_sup(g, p, seg) / (factorial(p) * R**p) for p in range(g.degree + 1))
        return LevelEstimate(R, value, True)
    if len(g.exps) != 1:
        raise ValueError("level of a sum of exponentials has no closed form here")
    (amp, c), = g.exps
    base = abs(float(amp)) * math.exp(max(float(c) * float(seg.a), float(c) * float(seg.b)))
    ratio = abs(float(c)) / R
    p_star = math.floor(ratio)
    peak = math.exp(p_star * math.log(ratio) - math.lgamma(p_star + 1)) if ratio else 1.0
    return LevelEstimate(R, base * peak, True)


def level_truncated(g, seg: Segment, R, p_max: int, grid_points: int = 64) -> LevelEstimate:
    """Grid lower bound ``max_{p <= p_max} max_grid |D^p g| / (p! R^p)``."""
    R = float(R)
    if grid_points < 2:
        raise ValueError("need at least two grid points")
    best = 0.0
    for x in np.linspace(float(seg.a), float(seg.b), grid_points):
        j = jet_from_expr(g, float(x), p_max, sc.FLOAT)
        for p in range(p_max + 1):
            best = max(best, abs(j[p]) / (factorial(p) * R**p))
    return LevelEstimate(R, best, False, p_max)


# ---------------------------------------------------------------------------
# certificate arithmetic


@dataclass(frozen=True)
class RadiusCertificate:
    R: float
    S: float
    N_R_u: float
    N_S_g: float
    rho: float | None
    T: float
    S0: float | None
    T0: float | None
    r_product: float
    r_olver: float
    r_inversion: float


def certificate(R, S, N_R_u, N_S_g, rho=None) -> RadiusCertificate:
    R, S, N_R_u, N_S_g = (float(v) for v in (R, S, N_R_u, N_S_g))
    for name, v in (("R", R), ("S", S), ("N_R_u", N_R_u), ("N_S_g", N_S_g)):
        if not v > 0:
            raise ValueError(f"{name} must be positive")
    T = 2 * max(R, 2 * S)
    S0 = T0 = None
    if rho is not None:
        rho = float(rho)
        if not rho > 0:
            raise ValueError("rho must be positive")
        S0 = (1 + N_S_g / rho) * S
        T0 = 2 * max(R, 2 * S0)
    r_product = 1 / (4 * N_R_u * (T0 if T0 is not None else T))
    return RadiusCertificate(
        R, S, N_R_u, N_S_g, rho, T, S0, T0,
        r_product=r_product,
        r_olver=1 / (16 * N_R_u * R),
        r_inversion=1 / (8 * N_R_u * T),
    )


def segment_level(S, N_S_g, r, sup_dev=0.0) -> float:
    """Level ``(1 + N_S(g)/(r - ||g - g(t)||)) S`` of ``phi_t o g`` on a sub-segment."""
    if not sup_dev < r:
        raise ValueError("need ||g - g(t)|| < r")
    return (1 + float(N_S_g) / (float(r) - float(sup_dev))) * float(S)


def inversion_certificate(u, seg: Segment, R) -> RadiusCertificate:
    """Certificate for ``x = t + z u(x)``: ``g = u`` and ``S = R``."""
    level = level_exact(u, seg, R)
    if level.value == 0:
        raise ValueError("u vanishes identically; every z is admissible")
    return certificate(R, R, level.value, level.value)


# ---------------------------------------------------------------------------
# the level lemmas


def _require_exact(*levels: LevelEstimate) -> None:
    if not all(lv.exact for lv in levels):
        raise ValueError("inequalities are only checked on closed-form (exact) levels")


def lemma_product_bound(levels, product_level_at_2R: LevelEstimate) -> bool:
    """``N_{2R}(g_1...g_p) <= 2^{p-1} N_R(g_1)...N_R(g_p)``."""
    levels = list(levels)
    _require_exact(*levels, product_level_at_2R)
    R = levels[0].R
    if any(not math.isclose(lv.R, R) for lv in levels) or not math.isclose(product_level_at_2R.R, 2 * R):
        raise ValueError("factor levels must share R and the product level must be at 2R")
    bound = 2 ** (len(levels) - 1) * math.prod(lv.value for lv in levels)
    return product_level_at_2R.value <= bound * (1 + RTOL)


def lemma_derivative_bound(g_level_S: LevelEstimate, q: int, dq_level_2S: LevelEstimate) -> bool:
    """``N_{2S}(D^q g) <= N_S(g) q! (2S)^q``."""
    _require_exact(g_level_S, dq_level_2S)
    S = g_level_S.R
    if not math.isclose(dq_level_2S.R, 2 * S):
        raise ValueError("the derivative level must be taken at 2S")
    bound = g_level_S.value * factorial(q) * (2 * S) ** q
    return dq_level_2S.value <= bound * (1 + RTOL)


def corollary_coeff_bound(u, g, seg: Segment, R, S, n: int):
    """``(N_{2T}(D^{n-1}(u^n Dg)), (S/T) N_S(g) n! (4 N_R(u) T)^n)``; raises if violated."""
    if n < 1:
        raise ValueError("n must be >= 1")
    u, g = _closed_form(u), _closed_form(g)
    if isinstance(u, tuple) or isinstance(g, tuple):
        raise ValueError("the coefficient bound needs polynomial or exponential inputs")
    R, S = float(R), float(S)
    T = 2 * max(R, 2 * S)
    if u.is_polynomial and not any(u.poly):
        left = 0.0
    else:
        h = g.derivative(1)
        for _ in range(n):
            h = h * u
        left = level_exact(h.derivative(n - 1), seg, 2 * T).value
    right = (S / T) * level_exact(g, seg, S).value * factorial(n) * (4 * level_exact(u, seg, R).value * T) ** n
    if left > right * (1 + RTOL):
        raise BoundViolation(f"coefficient bound violated at n={n}: {left} > {right}")
    return left, right


# ---------------------------------------------------------------------------
# commutation of phi_t with the Lagrange series


@dataclass(frozen=True)
class PowerSeries:
    """``psi(w) = sum c_k w^k`` with radius ``rho``; ``closed`` evaluates it."""

    coeff: object  # k -> c_k
    rho: float
    closed: object  # w -> psi(w)
    majorant: object  # r -> sum |c_k| r^k
    degree: int | None = None

    @classmethod
    def geometric(cls):
        return cls(lambda k: Fraction(1), 1.0, lambda w: 1 / (1 - w), lambda r: 1 / (1 - r))

    @classmethod
    def polynomial(cls, coeffs):
        cs = [Fraction(c) for c in coeffs]

        def coeff(k):
            return cs[k] if k < len(cs) else Fraction(0)

        return cls(
            coeff, math.inf,
            lambda w: ser_eval(cs, w),
            lambda r: sum(abs(float(c)) * r**k for k, c in enumerate(cs)),
            len(cs) - 1,
        )

    @property
    def is_polynomial(self) -> bool:
        return self.degree is not None


@dataclass(frozen=True)
class CommutationResult:
    lhs: object
    rhs: object
    defect: object
    tail_bound: float
    exact: bool

    @property
    def within_tail(self) -> bool:
        return self.exact or float(self.defect) <= self.tail_bound


def _phi_jet(psi: PowerSeries, g_jet: Jet) -> Jet:
    """Jet of ``psi(g - g(t))`` at ``t`` by composition."""
    be = g_jet.backend
    outer = Jet(g_jet[0], tuple(sc.coerce(psi.coeff(k), be) * factorial(k) for k in range(g_jet.order + 1)), be)
    return jet_compose(outer, g_jet)


def commutation_check(u, g, psi: PowerSeries, t, z, order: int,
                      cert: RadiusCertificate | None = None) -> CommutationResult:
    """Compare ``phi_t(L_u(g,z)(t))`` with ``L_u(phi_t o g, z)(t)``.

    A polynomial ``psi`` is handled coefficientwise over the rationals and
    gives an exact zero. Otherwise both sides are evaluated in floating point
    and the reported tail bound covers the truncation of both series.
    """
    if cert is not None and not abs(float(z)) < cert.r_product:
        raise RadiusError(f"|z| = {abs(float(z))} is not below the certified radius {cert.r_product}")
    if psi.is_polynomial:
        u_j = jet_from_expr(u, t, order, sc.EXACT)
        g_j = jet_from_expr(g, t, order, sc.EXACT)
        s = list(lag_series(u_j, g_j, order).coeffs)
        s[0] = sc.zero(sc.EXACT)
        cs = [psi.coeff(k) for k in range(psi.degree + 1)]
        left = ser_poly(cs, s, order)
        shifted = g_j - g_j[0]
        right = list(lag_series(u_j, jet_poly(cs, shifted), order).coeffs)
        zq = sc.coerce(z, sc.EXACT)
        lhs, rhs = ser_eval(left, zq), ser_eval(right, zq)
        defect = sum(abs(a - b) for a, b in zip(left, right))
        return CommutationResult(lhs, rhs, defect, 0.0, True)

    if cert is None:
        raise ValueError("a non-polynomial psi needs a radius certificate")
    z = float(z)
    u_j = jet_from_expr(u, float(t), order, sc.FLOAT)
    g_j = jet_from_expr(g, float(t), order, sc.FLOAT)
    s = lag_series(u_j, g_j, order)
    inner = ser_eval((0.0,) + tuple(s.coeffs[1:]), z)
    lhs = psi.closed(inner)
    rhs = lag_series(u_j, _phi_jet(psi, g_j), order)(z)
    return CommutationResult(lhs, rhs, abs(lhs - rhs), _commutation_tail(psi, cert, z, order, inner), False)


def _geometric_tail(scale, q, order):
    return math.inf if q >= 1 else scale * q ** (order + 1) / (1 - q)


def _commutation_tail(psi: PowerSeries, cert: RadiusCertificate, z: float, order: int, inner: float) -> float:
    """Bound on the truncation error of both sides at ``order``."""
    az = abs(z)
    # left: tail of sum a_n z^n, pushed through psi by a Lipschitz bound
    q = 4 * cert.N_R_u * cert.T * az
    tail_g = _geometric_tail(cert.S / cert.T * cert.N_S_g, q, order)
    reach = abs(inner) + tail_g
    if reach >= psi.rho:
        return math.inf
    h = (psi.rho - reach) / 2
    lip = psi.majorant(reach + h) / h  # Cauchy bound on |psi'| near the partial sum
    left = lip * tail_g
    # right: phi_t o g has level S_r with norm <= psi*(r); pick the best r
    right = math.inf
    for k in range(1, 200):
        r = psi.rho * k / 200
        S_r = segment_level(cert.S, cert.N_S_g, r)
        T_r = 2 * max(cert.R, 2 * S_r)
        q_r = 4 * cert.N_R_u * T_r * az
        right = min(right, _geometric_tail(S_r / T_r * psi.majorant(r), q_r, order))
    return left + right
