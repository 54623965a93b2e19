"""The bilinear forms ``Phi_{n,u}(f, g)`` evaluated at a base point.

``Phi_{n,u}(f, g) = sum_{p=0}^{n} C(n,p) D^p(u^p f) D^{n-p}(u^{-p} g)``

Both inputs and the weight ``u`` are jets of order at least ``n``; each term
uses exactly ``n`` derivative levels, so order ``n`` suffices.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

from . import scalar as sc
from .errors import InsufficientOrderError, JetZeroDivisionError
from .jet import Jet, jet_mul, jet_powi, jet_reciprocal


@dataclass(frozen=True)
class PhiInstance:
    n: int
    u: Jet
    f: Jet
    g: Jet


def _check(n: int, *jets: Jet) -> None:
    if n < 0:
        raise ValueError("n must be a natural number")
    for j in jets:
        if j.order < n:
            raise InsufficientOrderError(f"Phi_{n} needs jets of order >= {n}, got {j.order}")


def phi_value(inst: PhiInstance):
    return phi(inst.n, inst.u, inst.f, inst.g)


def phi(n: int, u: Jet, f: Jet, g: Jet):
    """``Phi_{n,u}(f, g)`` at the common base point."""
    _check(n, u, f, g)
    if u[0] == 0:
        raise JetZeroDivisionError("Phi_{n,u} needs u(t0) != 0")
    u = u.truncate(n)
    f = f.truncate(n)
    g = g.truncate(n)
    u_inv = jet_reciprocal(u)
    total = sc.zero(u.backend)
    up = Jet.constant(sc.one(u.backend), u.base_point, n, u.backend)
    um = up
    for p in range(n + 1):
        if p:
            up = jet_mul(up, u)
            um = jet_mul(um, u_inv)
        total += comb(n, p) * jet_mul(up, f)[p] * jet_mul(um, g)[n - p]
    return total


def phi_profile(n: int, u: Jet) -> list:
    """``[Phi_{0,u}(1,1), ..., Phi_{n,u}(1,1)]``."""
    _check(n, u)
    out = []
    for m in range(n + 1):
        one = Jet.constant(sc.one(u.backend), u.base_point, m, u.backend)
        out.append(phi(m, u, one, one))
    return out


def phi_from_profile(n: int, u: Jet, f: Jet, g: Jet):
    """Right-hand side of ``Phi_{n,u}(f,g) = sum_r C(n,r) Phi_{n-r,u}(1,1) D^r(fg)``."""
    _check(n, u, f, g)
    prof = phi_profile(n, u)
    fg = jet_mul(f.truncate(n), g.truncate(n))
    total = sc.zero(u.backend)
    for r in range(n + 1):
        total += comb(n, r) * prof[n - r] * fg[r]
    return total


def phi_power_sides(n: int, u: Jet, q: int):
    """``(Phi_{n,u}(u^q, u^-q), Phi_{n,u}(1, 1))``."""
    _check(n, u)
    one = Jet.constant(sc.one(u.backend), u.base_point, n, u.backend)
    return phi(n, u, jet_powi(u, q), jet_powi(u, -q)), phi(n, u, one, one)
