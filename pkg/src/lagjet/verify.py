"""Seeded verification suites, one per identity id, producing JSON-ready reports."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import scalar as sc
from .bounds import (
    PowerSeries,
    Segment,
    certificate,
    commutation_check,
    lemma_derivative_bound,
    lemma_product_bound,
    level_exact,
)
from .expr import Expc
from .exptype import ExpTypeFn, abel_side, domain_A_radius, exp_type_deriv0, exp_type_series, exp_type_shift
from .fs import (
    LHS,
    RHS,
    FsInstance,
    fs_eq4_side,
    fs_eq5_side,
    fs_eq6_side,
    fs_eq12_check,
    fs_power_identity,
    fs_power_identity_dual,
    phi_dpsi_sides,
    phi_dpsi2_sides,
)
from .jet import Jet, jet_mul, jet_powi, jet_reciprocal
from .lagrange import apply_poly, lag_series, product_identity
from .phi import phi, phi_from_profile, phi_power_sides
from .rng import InstanceRng

DEFAULT_TOL = 1e-9
ABEL_LAMBDAS = ("1/2", "1", "3", "-1/3")


@dataclass
class IdentityReport:
    identity: str
    backend: str
    params: dict
    lhs: str
    rhs: str
    equal: bool
    abs_err: float | None
    passed: bool

    def to_dict(self) -> dict:
        return {
            "identity": self.identity,
            "backend": self.backend,
            "params": self.params,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "equal": self.equal,
            "abs_err": self.abs_err,
            "passed": self.passed,
        }


@dataclass
class SuiteResult:
    suite: str
    seed: int
    backend: str
    instances: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.instances)

    @property
    def failures(self) -> list:
        return [r for r in self.instances if not r.passed]

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "backend": self.backend,
            "instances": [r.to_dict() for r in self.instances],
            "passed": self.passed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"


@dataclass(frozen=True)
class SuiteParams:
    n: int | None = None
    lam: str | None = None
    p: int | None = None
    q: int | None = None
    order: int | None = None
    trials: int | None = None
    seed: int = 0
    backend: str | None = None
    tol: float = DEFAULT_TOL


def _render(v) -> str:
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_render(x) for x in v) + "]"
    return sc.render(v)


def _magnitude(*jets: Jet) -> float:
    """Product of the largest entries of ``jets``: the size of the terms that cancel."""
    return math.prod(max(abs(float(v)) for v in j.derivs) for j in jets)


def _power_scale(u: Jet, k: int, *others: Jet) -> float:
    """Magnitude of ``u^{+-k}`` times the other inputs, for float tolerances."""
    k = max(k, 1)
    return max(_magnitude(jet_powi(u, k), *others), _magnitude(jet_powi(u, -k), *others))


def compare(identity, backend, params, lhs, rhs, tol=DEFAULT_TOL, scale=None) -> IdentityReport:
    """Report for an equality; sequences are compared elementwise.

    On the float backend the tolerance is relative to ``max(1, |lhs|, |rhs|,
    scale)``; ``scale`` estimates the size of intermediate terms.
    """
    seq = isinstance(lhs, (list, tuple))
    pairs = list(zip(lhs, rhs)) if seq else [(lhs, rhs)]
    if seq and len(lhs) != len(rhs):
        return IdentityReport(identity, backend, params, _render(lhs), _render(rhs), False, None, False)
    if backend == sc.EXACT:
        equal = all(a == b for a, b in pairs)
        return IdentityReport(identity, backend, params, _render(lhs), _render(rhs), equal, None, equal)
    err = max(abs(float(a) - float(b)) for a, b in pairs)
    if scale is not None:
        params = {**params, "scale": scale}
    size = max([1.0, float(scale or 0.0)] + [abs(float(v)) for pair in pairs for v in pair])
    equal = err <= tol * size
    return IdentityReport(identity, backend, params, _render(lhs), _render(rhs), equal, err, equal)


def _bounded(identity, params, lhs, rhs, ok: bool) -> IdentityReport:
    """Float report whose pass condition is an inequality or a tail bound."""
    err = abs(float(lhs) - float(rhs))
    return IdentityReport(identity, sc.FLOAT, params, _render(lhs), _render(rhs), lhs == rhs, err, ok)


# ---------------------------------------------------------------------------
# suites; each yields reports in trial order


def _phi_theorem1(P: SuiteParams, rng: InstanceRng, be: str):
    for i in range(P.trials):
        n, q = rng.integer(0, P.n), rng.integer(0, P.q)
        u, f, g = rng.jets(3, n, be, invertible=True)
        params = {"trial": i, "n": n, "q": q}
        sc1 = _power_scale(u, n + q) if be == sc.FLOAT else None
        sc2 = _power_scale(u, n, f, g) if be == sc.FLOAT else None
        yield compare("phi-theorem1", be, {**params, "form": "power"}, *phi_power_sides(n, u, q), P.tol, sc1)
        yield compare("phi-theorem1", be, {**params, "form": "profile"},
                      phi(n, u, f, g), phi_from_profile(n, u, f, g), P.tol, sc2)


def _phi_remark(P, rng, be):
    for i in range(P.trials):
        n = rng.integer(0, P.n)
        u, f, g, h = rng.jets(4, n, be, invertible=True)
        lhs = phi(n, u, jet_mul(f, h), jet_mul(g, jet_reciprocal(h)))
        scale = _power_scale(u, n, f, g, h, jet_reciprocal(h)) if be == sc.FLOAT else None
        yield compare("phi-remark", be, {"trial": i, "n": n}, lhs, phi(n, u, f, g), P.tol, scale)


def _fs_suite(name, side_fn):
    def run(P, rng, be):
        for i in range(P.trials):
            n, lam = rng.integer(0, P.n), rng.integer(1, int(P.lam))
            u, v, w = rng.jets(3, n, be, invertible=True)
            inst = FsInstance(n, lam, u, v, w)
            scale = _power_scale(u, n + lam, v, w) if be == sc.FLOAT else None
            yield compare(name, be, {"trial": i, "n": n, "lambda": lam},
                          side_fn(inst, LHS), side_fn(inst, RHS), P.tol, scale)
    return run


def _fs_lemma(P, rng, be):
    for i in range(P.trials):
        m, N = rng.integer(0, P.n), rng.integer(0, P.p)
        psi = rng.jet(m + 2, be, invertible=True)
        params = {"trial": i, "m": m, "N": N}
        scale = _power_scale(psi, m + N + 2) ** 2 if be == sc.FLOAT else None
        yield compare("fs-lemma9-10", be, {**params, "form": "lemma9"}, *phi_dpsi_sides(m, N, psi), P.tol, scale)
        a, b, c = phi_dpsi2_sides(m, N, psi)
        yield compare("fs-lemma9-10", be, {**params, "form": "lemma10"}, [a, a], [b, c], P.tol, scale)


def _fs_eq12(P, rng, be):
    for i in range(P.trials):
        p, m = rng.integer(0, P.p), rng.integer(0, P.n)
        q = rng.choice([k for k in range(-P.q, P.q + 1) if k])
        psi = rng.jet(m + p, be, invertible=True)
        scale = _power_scale(psi, m + abs(q) + p) if be == sc.FLOAT else None
        yield compare("fs-eq12", be, {"trial": i, "p": p, "m": m, "q": q}, *fs_eq12_check(p, m, q, psi), P.tol, scale)


def _fs_power(P, rng, be):
    for i in range(P.trials):
        n = rng.integer(1, P.n)
        p = rng.integer(1, n)
        psi = rng.jet(n, be, invertible=True)
        scale = _power_scale(psi, n + p) ** 2 if be == sc.FLOAT else None
        yield compare("fs-power", be, {"trial": i, "n": n, "p": p}, *fs_power_identity(n, p, psi), P.tol, scale)


def _fs_power_dual(P, rng, be):
    for i in range(P.trials):
        n, p = rng.integer(1, P.n), rng.integer(1, P.p)
        psi = rng.jet(n + p, be, invertible=True)
        scale = _power_scale(psi, n + 2 * p) ** 2 if be == sc.FLOAT else None
        yield compare("fs-power-dual", be, {"trial": i, "n": n, "p": p},
                      *fs_power_identity_dual(n, p, psi), P.tol, scale)


def _lagrange_product(P, rng, be):
    for i in range(P.trials):
        n = rng.integer(0, P.n)
        psi, f, g = rng.jets(3, n, be)
        yield compare("lagrange-product", be, {"trial": i, "n": n}, *product_identity(psi, [f, g], n), P.tol)


def _lagrange_multifactor(P, rng, be):
    for i in range(P.trials):
        n, p = rng.integer(0, P.n), rng.integer(2, P.p)
        psi, *fs = rng.jets(p + 1, n, be)
        yield compare("lagrange-multifactor", be, {"trial": i, "n": n, "p": p},
                      *product_identity(psi, fs, n), P.tol)


def _lagrange_poly(P, rng, be):
    for i in range(P.trials):
        N, d = P.order, rng.integer(0, P.p)
        psi, f = rng.jets(2, N, be)
        poly = [sc.coerce(c, be) for c in rng.polynomial(d)]
        left, right = apply_poly(poly, lag_series(psi, f, N), (psi, f))
        yield compare("lagrange-poly", be, {"trial": i, "order": N, "degree": d}, left, right, P.tol)


def _abel(P, rng, be):
    lams = [P.lam] if P.lam is not None else list(ABEL_LAMBDAS)
    for lam in lams:
        for n in range(P.n + 1):
            lhs, rhs = abel_side(n, lam, LHS), abel_side(n, lam, RHS)
            equal = (lhs - rhs).is_zero()
            yield IdentityReport("abel", be, {"n": n, "lambda": str(sc.parse_rational(lam))},
                                 repr(lhs), repr(rhs), equal, None, equal)


def _random_expc(rng: InstanceRng) -> ExpTypeFn:
    return ExpTypeFn.expc(rng.choice(["-2", "-1", "-1/2", "1/2", "1", "3/2", "2"]),
                          amplitude=rng.rational(nonzero=True))


def _point_in_A(rng: InstanceRng, f: ExpTypeFn) -> float:
    _, K = f.growth_constants()
    return rng.uniform(-0.5, 0.5) * domain_A_radius(K)


def _exptype_shift(P, rng, be):
    for i in range(P.trials):
        lam = rng.rational()
        if be == sc.EXACT:
            d = rng.integer(0, P.order)
            f, x = ExpTypeFn.polynomial(rng.polynomial(d)), rng.rational()
            params = {"trial": i, "degree": d, "lambda": str(lam), "x": str(x)}
        else:
            f = _random_expc(rng)
            x = _point_in_A(rng, f)
            params = {"trial": i, "f": _fn_text(f), "lambda": str(lam), "x": x}
        yield compare("exptype-shift", be, params, *exp_type_shift(f, lam, x), P.tol)


def _exptype_deriv0(P, rng, be):
    for i in range(P.trials):
        m = rng.integer(1, max(P.n, 1))
        if be == sc.EXACT:
            d = rng.integer(0, P.order)
            f, x = ExpTypeFn.polynomial(rng.polynomial(d)), rng.rational()
            params = {"trial": i, "m": m, "degree": d, "x": str(x)}
        else:
            f = _random_expc(rng)
            x = _point_in_A(rng, f)
            params = {"trial": i, "m": m, "f": _fn_text(f), "x": x}
        yield compare("exptype-deriv0", be, params, *exp_type_deriv0(f, m, x), P.tol)


def _exptype_series(P, rng, be):
    for i in range(P.trials):
        lam = Fraction(rng.choice(["1/2", "1", "3", "-1/3", "5/2"]))
        if be == sc.EXACT:
            d = rng.integer(0, P.order)
            f = ExpTypeFn.polynomial(rng.polynomial(d))
            x, y, z = rng.rationals(3)
            chk = exp_type_series(f, x, y, z, lam)
            yield compare("exptype-series", be,
                          {"trial": i, "degree": d, "lambda": str(lam), "x": str(x), "y": str(y), "z": str(z)},
                          chk.lhs, chk.rhs)
        else:
            f = _random_expc(rng)
            x = _point_in_A(rng, f)
            y, z = rng.uniform(-1, 1), rng.uniform(-1, 1)
            chk = exp_type_series(f, x, y, z, lam)
            ok = chk.abs_err <= chk.tail_bound + P.tol * max(1.0, abs(chk.rhs))
            yield _bounded("exptype-series",
                           {"trial": i, "f": _fn_text(f), "lambda": str(lam), "x": x, "y": y, "z": z,
                            "tail_bound": chk.tail_bound},
                           chk.lhs, chk.rhs, ok)


def _fn_text(f: ExpTypeFn) -> str:
    if f.is_polynomial:
        return "poly" + _render(list(f.poly))
    return " + ".join(f"{a}*expc({c})" for a, c in f.exps)


def _closed_form_fn(rng: InstanceRng, kind: str) -> ExpTypeFn:
    if kind == "poly":
        return ExpTypeFn.polynomial(rng.polynomial(rng.integer(0, 4)))
    return _random_expc(rng)


def _random_segment(rng: InstanceRng) -> Segment:
    a = rng.integer(-2, 1)
    return Segment(a, a + rng.integer(1, 2))


def _bounds_product(P, rng, be):
    for i in range(P.trials):
        kind = rng.choice(["poly", "exp"])
        k = rng.integer(1, P.p)
        seg, R = _random_segment(rng), rng.choice([0.25, 0.5, 1.0, 2.0])
        fns = [_closed_form_fn(rng, kind) for _ in range(k)]
        prod = fns[0]
        for f in fns[1:]:
            prod = prod * f
        levels = [level_exact(f, seg, R) for f in fns]
        top = level_exact(prod, seg, 2 * R)
        bound = 2 ** (k - 1) * math.prod(lv.value for lv in levels)
        ok = lemma_product_bound(levels, top)
        yield _bounded("bounds-product",
                       {"trial": i, "kind": kind, "factors": k, "segment": [seg.a, seg.b], "R": R},
                       top.value, bound, ok)


def _bounds_derivative(P, rng, be):
    for i in range(P.trials):
        g = _closed_form_fn(rng, rng.choice(["poly", "exp"]))
        q = rng.integer(0, P.q)
        seg, S = _random_segment(rng), rng.choice([0.25, 0.5, 1.0, 2.0])
        lv = level_exact(g, seg, S)
        top = level_exact(g.derivative(q), seg, 2 * S)
        bound = lv.value * math.factorial(q) * (2 * S) ** q
        yield _bounded("bounds-derivative",
                       {"trial": i, "g": _fn_text(g), "q": q, "segment": [seg.a, seg.b], "S": S},
                       top.value, bound, lemma_derivative_bound(lv, q, top))


def _commutation(P, rng, be):
    order = P.order
    for i in range(P.trials):
        cu, cg = rng.choice(["1/2", "1", "2"]), rng.choice(["-1", "1/2", "1"])
        u, g = Expc(Fraction(cu)), Expc(Fraction(cg))
        params = {"trial": i, "u": f"expc({cu})", "g": f"expc({cg})", "t": 0, "order": order}
        if be == sc.EXACT:
            cs = rng.polynomial(rng.integer(0, P.p))
            z = rng.rational()
            res = commutation_check(u, g, PowerSeries.polynomial(cs), 0, z, order)
            yield IdentityReport("commutation", be, {**params, "psi": _render(cs), "z": str(z)},
                                 sc.render(res.lhs), sc.render(res.rhs), res.defect == 0, None, res.defect == 0)
        else:
            seg, R = Segment(0, 1), 1.0
            cert = certificate(R, R, level_exact(u, seg, R).value, level_exact(g, seg, R).value, rho=1.0)
            z = rng.choice([-1, 1]) * rng.uniform(0.1, 0.5) * cert.r_product
            res = commutation_check(u, g, PowerSeries.geometric(), 0, z, order, cert)
            ok = res.defect <= res.tail_bound + P.tol * max(1.0, abs(res.rhs))
            yield _bounded("commutation",
                           {**params, "psi": "geometric", "z": z, "tail_bound": res.tail_bound},
                           res.lhs, res.rhs, ok)


@dataclass(frozen=True)
class Suite:
    run: object
    backends: tuple
    defaults: dict


_BOTH = (sc.EXACT, sc.FLOAT)
SUITES = {
    "phi-theorem1": Suite(_phi_theorem1, _BOTH, {"n": 8, "q": 5, "trials": 200}),
    "phi-remark": Suite(_phi_remark, _BOTH, {"n": 8, "trials": 100}),
    "fs-eq4": Suite(_fs_suite("fs-eq4", fs_eq4_side), _BOTH, {"n": 8, "lam": 5, "trials": 100}),
    "fs-eq5": Suite(_fs_suite("fs-eq5", fs_eq5_side), _BOTH, {"n": 8, "lam": 5, "trials": 100}),
    "fs-eq6": Suite(_fs_suite("fs-eq6", fs_eq6_side), _BOTH, {"n": 8, "lam": 5, "trials": 100}),
    "fs-lemma9-10": Suite(_fs_lemma, _BOTH, {"n": 6, "p": 4, "trials": 50}),
    "fs-eq12": Suite(_fs_eq12, _BOTH, {"n": 4, "p": 4, "q": 5, "trials": 100}),
    "fs-power": Suite(_fs_power, _BOTH, {"n": 8, "trials": 100}),
    "fs-power-dual": Suite(_fs_power_dual, _BOTH, {"n": 8, "p": 4, "trials": 100}),
    "lagrange-product": Suite(_lagrange_product, _BOTH, {"n": 12, "trials": 200}),
    "lagrange-multifactor": Suite(_lagrange_multifactor, _BOTH, {"n": 8, "p": 4, "trials": 100}),
    "lagrange-poly": Suite(_lagrange_poly, _BOTH, {"order": 10, "p": 5, "trials": 50}),
    "abel": Suite(_abel, (sc.EXACT,), {"n": 10, "trials": 1}),
    "exptype-shift": Suite(_exptype_shift, _BOTH, {"order": 8, "trials": 100}),
    "exptype-deriv0": Suite(_exptype_deriv0, _BOTH, {"n": 4, "order": 8, "trials": 100}),
    "exptype-series": Suite(_exptype_series, _BOTH, {"order": 8, "trials": 50}),
    "bounds-product": Suite(_bounds_product, (sc.FLOAT,), {"p": 3, "trials": 50}),
    "bounds-derivative": Suite(_bounds_derivative, (sc.FLOAT,), {"q": 4, "trials": 50}),
    "commutation": Suite(_commutation, _BOTH, {"order": 12, "p": 5, "trials": 20}),
}


class SuiteUsageError(ValueError):
    """Unknown suite, unsupported backend or invalid parameters."""


def run_suite(name: str, params: SuiteParams | None = None) -> SuiteResult:
    if name not in SUITES:
        raise SuiteUsageError(f"unknown identity id {name!r}; choose from {', '.join(SUITES)}")
    suite = SUITES[name]
    params = params or SuiteParams()
    backend = params.backend or suite.backends[0]
    if backend not in suite.backends:
        raise SuiteUsageError(f"{name} supports backend(s) {', '.join(suite.backends)}, not {backend!r}")
    merged = {k: getattr(params, k) for k in ("n", "lam", "p", "q", "order", "trials")}
    for k, v in suite.defaults.items():
        if merged[k] is None:
            merged[k] = v
    for k in ("n", "p", "q", "order", "trials"):
        if merged[k] is not None and merged[k] < 0:
            raise SuiteUsageError(f"--{k} must be non-negative")
    if name.startswith("fs-eq") and name[5:] in ("4", "5", "6"):
        lam = sc.parse_rational(str(merged["lam"]))
        if lam.denominator != 1 or lam < 1:
            raise SuiteUsageError("--lambda must be an integer >= 1 for this identity")
        merged["lam"] = int(lam)
    if name in ("lagrange-multifactor",) and merged["p"] < 2:
        raise SuiteUsageError("--p must be at least 2")
    P = SuiteParams(**merged, seed=params.seed, backend=backend, tol=params.tol)
    rng = InstanceRng(params.seed)
    return SuiteResult(name, params.seed, backend, list(suite.run(P, rng, backend)))
