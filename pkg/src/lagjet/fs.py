"""Frobenius-Stickelberger type identities, evaluated side by side.

Left- and right-hand sides are computed by separate code paths that share
nothing beyond the jet arithmetic, so a bug on one side cannot cancel
against the other.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from . import scalar as sc
from .errors import InsufficientOrderError, JetZeroDivisionError
from .jet import Jet, jet_derive, jet_mul, jet_powi
from .phi import phi

LHS = "lhs"
RHS = "rhs"


@dataclass(frozen=True)
class FsInstance:
    n: int
    lam: int
    u: Jet
    v: Jet
    w: Jet

    def __post_init__(self):
        if not isinstance(self.lam, int) or self.lam < 1:
            raise ValueError("lambda must be an integer >= 1")
        if self.n < 0:
            raise ValueError("n must be a natural number")
        for j in (self.u, self.v, self.w):
            if j.order < self.n:
                raise InsufficientOrderError(
                    f"identity of order {self.n} needs jets of order >= {self.n}"
                )
        if self.u[0] == 0:
            raise JetZeroDivisionError("u must not vanish at the base point")


def _weight(inst: FsInstance, p: int, alternating: bool):
    w = Fraction(comb(inst.n, p), p + inst.lam)
    if alternating and p % 2:
        w = -w
    return w if inst.u.backend == sc.EXACT else float(w)


def _side(side: str) -> str:
    if side not in (LHS, RHS):
        raise ValueError(f"side must be {LHS!r} or {RHS!r}")
    return side


def fs_eq4_side(inst: FsInstance, side: str):
    """``sum C(n,p)/(p+l) D^p(u^{p+l} w) D^{n-p}(u^{-p-l} v)`` or its ``u = 1`` value."""
    n, lam = inst.n, inst.lam
    u, v, w = (j.truncate(n) for j in (inst.u, inst.v, inst.w))
    total = sc.zero(u.backend)
    if _side(side) == LHS:
        for p in range(n + 1):
            a = jet_mul(jet_powi(u, p + lam), w)[p]
            b = jet_mul(jet_powi(u, -p - lam), v)[n - p]
            total += _weight(inst, p, False) * a * b
    else:
        for p in range(n + 1):
            total += _weight(inst, p, False) * w[p] * v[n - p]
    return total


def fs_eq5_side(inst: FsInstance, side: str):
    """``sum C(n,p)(-1)^p/(p+l) u^{-p-l} D^{n-p}(v D^p(u^{p+l} w))`` and its ``u = 1`` value."""
    n, lam = inst.n, inst.lam
    u, v, w = (j.truncate(n) for j in (inst.u, inst.v, inst.w))
    total = sc.zero(u.backend)
    lhs = _side(side) == LHS
    for p in range(n + 1):
        inner = jet_mul(jet_powi(u, p + lam), w) if lhs else w
        term = jet_mul(v.truncate(n - p), jet_derive(inner, p))[n - p]
        if lhs:
            term *= jet_powi(u.truncate(0), -p - lam)[0]
        total += _weight(inst, p, True) * term
    return total


def fs_eq6_side(inst: FsInstance, side: str):
    """``sum C(n,p)(-1)^p/(p+l) u^{p+l} D^p(v D^{n-p}(u^{-p-l} w))`` and its ``u = 1`` value."""
    n, lam = inst.n, inst.lam
    u, v, w = (j.truncate(n) for j in (inst.u, inst.v, inst.w))
    total = sc.zero(u.backend)
    lhs = _side(side) == LHS
    for p in range(n + 1):
        inner = jet_mul(jet_powi(u, -p - lam), w) if lhs else w
        term = jet_mul(v.truncate(p), jet_derive(inner, n - p))[p]
        if lhs:
            term *= u[0] ** (p + lam)
        total += _weight(inst, p, True) * term
    return total


def leibniz_power_rhs(n: int, u: Jet, v: Jet):
    """``sum C(n,p)/(p+1) D^p(U^{p+1}) D^{n-p}(V/U^{p+1})``, which equals ``D^n V``."""
    u, v = u.truncate(n), v.truncate(n)
    total = sc.zero(u.backend)
    for p in range(n + 1):
        c = Fraction(comb(n, p), p + 1)
        c = c if u.backend == sc.EXACT else float(c)
        total += c * jet_powi(u, p + 1)[p] * jet_mul(v, jet_powi(u, -p - 1))[n - p]
    return total


def leibniz_dual_rhs(n: int, u: Jet, v: Jet):
    """``sum (-1)^p C(n,p)/(p+1) U^{-p-1} D^{n-p}(V D^p U^{p+1})``, which equals ``D^n V``."""
    u, v = u.truncate(n), v.truncate(n)
    total = sc.zero(u.backend)
    for p in range(n + 1):
        c = Fraction((-1) ** p * comb(n, p), p + 1)
        c = c if u.backend == sc.EXACT else float(c)
        inner = jet_mul(v.truncate(n - p), jet_derive(jet_powi(u, p + 1), p))
        total += c * u[0] ** (-p - 1) * inner[n - p]
    return total


# ---------------------------------------------------------------------------
# F_m(psi, q) = D^{m-1}(psi^m D(psi^q)),  F_0(psi, q) = psi^q


@dataclass(frozen=True)
class FPower:
    m: int
    q: int
    psi: Jet


def f_power(fp: FPower) -> Jet:
    return F(fp.m, fp.psi, fp.q)


def F(m: int, psi: Jet, q: int) -> Jet:
    """Jet of ``F_m(psi, q)``; its order is ``psi.order - m`` for ``m >= 1``."""
    if m < 0:
        raise ValueError("F_m is defined for natural m only")
    if q < 0 and psi[0] == 0:
        raise JetZeroDivisionError("negative power of a jet vanishing at the base point")
    if m == 0:
        return jet_powi(psi, q)
    if psi.order < m:
        raise InsufficientOrderError(f"F_{m} needs a jet of order >= {m}, got {psi.order}")
    inner = jet_mul(jet_powi(psi, m).truncate(psi.order - 1), jet_derive(jet_powi(psi, q), 1))
    return jet_derive(inner, m - 1)


def fs_eq12_check(p: int, m: int, q: int, psi: Jet):
    """``(q D^p F_m(psi, q+p), (q+p) F_{m+p}(psi, q))`` at the base point.

    A tempting variant of this relation has ``F_{m+q}`` on the right; that
    version fails as soon as ``p != q`` (``p=2, m=0, q=1`` gives
    ``D^2 psi^3`` against ``3 psi D psi``). The index that makes it an
    identity, and the one the two power identities below rely on, is ``m+p``.
    """
    if q == 0:
        raise ValueError("q must be a nonzero integer")
    if p < 0 or m < 0:
        raise ValueError("p and m must be natural numbers")
    need = m + p
    if psi.order < need:
        raise InsufficientOrderError(f"needs a jet of order >= {need}, got {psi.order}")
    lhs = q * jet_derive(F(m, psi, q + p), p)[0]
    rhs = (q + p) * F(m + p, psi, q)[0]
    return lhs, rhs


def fs_eq12_swapped_index(p: int, m: int, q: int, psi: Jet):
    """The variant with index ``m+q`` on the right: ``(q D^p F_m(psi,q+p), (q+p) F_{m+q}(psi,q))``."""
    if m + q < 0:
        raise ValueError("F with a negative first index is undefined")
    lhs = q * jet_derive(F(m, psi, q + p), p)[0]
    rhs = (q + p) * F(m + q, psi, q)[0]
    return lhs, rhs


def fs_power_identity(n: int, p: int, psi: Jet):
    """``(2 D^p F_{n-p}(psi,-p), sum_k C(n,k) F_k(psi,-p) F_{n-k}(psi,-p))``."""
    if not 1 <= p <= n:
        raise ValueError("need 1 <= p <= n")
    if psi.order < n:
        raise InsufficientOrderError(f"needs a jet of order >= {n}, got {psi.order}")
    lhs = 2 * jet_derive(F(n - p, psi, -p), p)[0]
    rhs = sc.zero(psi.backend)
    for k in range(n + 1):
        rhs += comb(n, k) * F(k, psi, -p)[0] * F(n - k, psi, -p)[0]
    return lhs, rhs


def fs_power_identity_dual(n: int, p: int, psi: Jet):
    """``(2 F_{n+p}(psi,p), D^p sum_k C(n,k) F_k(psi,p) F_{n-k}(psi,p))``."""
    if n < 1 or p < 1:
        raise ValueError("need n >= 1 and p >= 1")
    if psi.order < n + p:
        raise InsufficientOrderError(f"needs a jet of order >= {n + p}, got {psi.order}")
    lhs = 2 * F(n + p, psi, p)[0]
    acc = None
    for k in range(n + 1):
        a = F(k, psi, p).truncate(psi.order - n)
        b = F(n - k, psi, p).truncate(psi.order - n)
        term = comb(n, k) * jet_mul(a, b)
        acc = term if acc is None else acc + term
    return lhs, jet_derive(acc, p)[0]


# ---------------------------------------------------------------------------
# Phi-form relations for psi^N Dpsi and psi^N (Dpsi)^2


def _psi_pow_times(psi: Jet, N: int, extra: Jet | None, order: int) -> Jet:
    base = jet_powi(psi.truncate(order), N)
    return base if extra is None else jet_mul(base, extra.truncate(order))


def phi_dpsi_sides(m: int, N: int, psi: Jet):
    """``Phi_{m,psi}(1, psi^N Dpsi)`` against ``(Phi_{m+1,psi}(1, psi^{N+1}) - D^{m+1} psi^{N+1})/(m+1)``."""
    if psi.order < m + 1:
        raise InsufficientOrderError(f"needs a jet of order >= {m + 1}")
    dpsi = jet_derive(psi.truncate(m + 1), 1)
    one_m = Jet.constant(sc.one(psi.backend), psi.base_point, m, psi.backend)
    one_m1 = Jet.constant(sc.one(psi.backend), psi.base_point, m + 1, psi.backend)
    lhs = phi(m, psi, one_m, _psi_pow_times(psi, N, dpsi, m))
    pw = jet_powi(psi.truncate(m + 1), N + 1)
    rhs = (phi(m + 1, psi, one_m1, pw) - pw[m + 1]) / (m + 1)
    return lhs, rhs


def phi_dpsi2_sides(m: int, N: int, psi: Jet):
    """Three equal values: ``Phi_{m,psi}(1, psi^N (Dpsi)^2)`` and its two rewritings."""
    if psi.order < m + 2:
        raise InsufficientOrderError(f"needs a jet of order >= {m + 2}")
    be = psi.backend
    dpsi = jet_derive(psi.truncate(m + 2), 1)  # order m + 1
    one = lambda k: Jet.constant(sc.one(be), psi.base_point, k, be)  # noqa: E731
    first = phi(m, psi, one(m), _psi_pow_times(psi, N, jet_mul(dpsi, dpsi), m))
    g1 = _psi_pow_times(psi, N + 1, dpsi, m + 1)
    second = (phi(m + 1, psi, one(m + 1), g1) - g1[m + 1]) / (m + 1)
    pw2 = jet_powi(psi.truncate(m + 2), N + 2)
    third = (phi(m + 2, psi, one(m + 2), pw2) - pw2[m + 2]) / ((m + 1) * (m + 2)) - g1[m + 1] / (m + 1)
    return first, second, third


def fs_classical_G(m: int, psi: Jet) -> Jet:
    """``G_m = D^{m-1}(psi^{m-2} Dpsi)``, so that ``F_m(psi,-1) = -G_m`` for ``m >= 1``."""
    if m < 1:
        raise ValueError("G_m is defined for m >= 1")
    if psi.order < m:
        raise InsufficientOrderError(f"G_{m} needs a jet of order >= {m}, got {psi.order}")
    inner = jet_mul(jet_powi(psi.truncate(psi.order - 1), m - 2), jet_derive(psi, 1))
    return jet_derive(inner, m - 1)


def fs_classical_sides(n: int, psi: Jet):
    """The ``p = 1`` case written with ``G``: ``2(G_n/psi - D G_{n-1})`` against
    ``sum_{k=1}^{n-1} C(n,k) G_k G_{n-k}``."""
    if n < 2:
        raise ValueError("need n >= 2")
    if psi.order < n:
        raise InsufficientOrderError(f"needs a jet of order >= {n}, got {psi.order}")
    G = {k: fs_classical_G(k, psi) for k in range(1, n + 1)}
    lhs = 2 * (G[n][0] / psi[0] - G[n - 1][1])
    rhs = sc.zero(psi.backend)
    for k in range(1, n):
        rhs += comb(n, k) * G[k][0] * G[n - k][0]
    return lhs, rhs
