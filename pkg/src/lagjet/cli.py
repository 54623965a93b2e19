"""Command line entry point: ``lagjet verify|invert|tree|radius``.

Exit status is 0 when every check passed, 1 when an identity or numerical
check failed, and 2 for usage errors (bad arguments, unparsable expressions,
unsupported backends).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from dataclasses import asdict

from . import scalar as sc
from .bounds import Segment, certificate, inversion_certificate, level_exact
from .errors import (
    ConvergenceError,
    DivergenceError,
    DomainError,
    NonRationalError,
    ParseError,
    RadiusError,
)
from .expr import parse
from .lagrange import invert, lag_compose_check, lambert_w_coeffs, tree_coeffs
from .verify import SUITES, SuiteParams, SuiteUsageError, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Literal(Fraction):
    """A rational command-line value that remembers whether it was written as a decimal."""

    decimal = False


def _rational(text: str):
    try:
        value = _Literal(sc.parse_rational(text))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc
    value.decimal = "/" not in text and not text.strip().lstrip("+-").isdigit()
    return value


def _exact_literals(**values) -> None:
    for name, v in values.items():
        if getattr(v, "decimal", False):
            raise NonRationalError(f"--{name} {float(v)!r}: decimal literals are rejected on the exact backend; write p/q")


def _expr(text: str):
    try:
        return parse(text)
    except ParseError as exc:
        raise argparse.ArgumentTypeError(f"cannot parse {text!r}: {exc}") from exc


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lagjet", description="Jet-based checks of Lagrange inversion identities.")
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run a seeded identity suite")
    v.add_argument("identity", choices=list(SUITES), metavar="identity-id")
    v.add_argument("--n", type=int)
    v.add_argument("--lambda", dest="lam")
    v.add_argument("--p", type=int)
    v.add_argument("--q", type=int)
    v.add_argument("--order", type=int)
    v.add_argument("--trials", type=int)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--backend", choices=sc.BACKENDS)
    v.add_argument("--tol", type=float, default=1e-9)
    v.add_argument("--json", metavar="PATH")
    v.add_argument("--quiet", action="store_true", help="print only the summary line")

    i = sub.add_parser("invert", help="solve x = t + z u(x) by the Lagrange series")
    i.add_argument("--u", type=_expr, required=True)
    i.add_argument("--g", type=_expr, help="also check L_u(g,z)(t) = g(x)")
    i.add_argument("--t", type=_rational, default=sc.parse_rational("0"))
    i.add_argument("--z", type=_rational, required=True)
    i.add_argument("--order", type=int, default=20)
    i.add_argument("--backend", choices=sc.BACKENDS, default=sc.FLOAT)
    i.add_argument("--certified", action="store_true", help="require |z| below the certified radius")
    i.add_argument("--interval", nargs=2, type=_rational, metavar=("A", "B"))
    i.add_argument("--R", type=_rational, default=sc.parse_rational("1"))
    i.add_argument("--tol", type=float, default=1e-10)
    i.add_argument("--json", metavar="PATH")

    t = sub.add_parser("tree", help="tree-function coefficients n^(n-1)/n!")
    t.add_argument("--order", type=int, default=10)
    t.add_argument("--lambert", action="store_true", help="print the Lambert W series instead")
    t.add_argument("--json", metavar="PATH")

    r = sub.add_parser("radius", help="certified radii from level norms")
    r.add_argument("--u", type=_expr, required=True)
    r.add_argument("--g", type=_expr)
    r.add_argument("--interval", nargs=2, type=_rational, metavar=("A", "B"), required=True)
    r.add_argument("--R", type=_rational, required=True)
    r.add_argument("--S", type=_rational)
    r.add_argument("--rho", type=_rational)
    r.add_argument("--json", metavar="PATH")
    return ap


def _write_json(path, payload) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            if isinstance(payload, str):
                fh.write(payload)
            else:
                fh.write(json.dumps(payload, indent=2, ensure_ascii=False) + "\n")


def _cmd_verify(a, out) -> int:
    params = SuiteParams(a.n, a.lam, a.p, a.q, a.order, a.trials, a.seed, a.backend, a.tol)
    try:
        result = run_suite(a.identity, params)
    except (SuiteUsageError, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    if not a.quiet:
        for rep in result.instances:
            mark = "ok  " if rep.passed else "FAIL"
            err = "" if rep.abs_err is None else f"  abs_err={rep.abs_err:.3e}"
            print(f"{mark} {json.dumps(rep.params, sort_keys=False)}  lhs={rep.lhs}  rhs={rep.rhs}{err}", file=out)
    n_fail = len(result.failures)
    print(f"{result.suite} [{result.backend}, seed {result.seed}]: "
          f"{len(result.instances) - n_fail}/{len(result.instances)} passed", file=out)
    _write_json(a.json, result.to_json())
    return EXIT_OK if result.passed else EXIT_FAIL


def _cmd_invert(a, out) -> int:
    radius = None
    if a.certified:
        lo, hi = a.interval or (a.t - 1, a.t + 1)
        seg = Segment(lo, hi)
        if not seg.contains(a.t):
            raise UsageError("t must lie in the interval")
        try:
            cert = inversion_certificate(a.u, seg, a.R)
        except ValueError as exc:
            raise UsageError(f"cannot certify: {exc}") from exc
        radius = cert.r_inversion
        print(f"certified radius 1/(8 N_R(u) T) = {radius!r}", file=out)
    if a.backend == sc.EXACT:
        _exact_literals(t=a.t, z=a.z)
        t, z = Fraction(a.t), Fraction(a.z)
    else:
        t, z = float(a.t), float(a.z)
    res = invert(a.u, t, z, a.order, a.backend, radius)
    ok = res.error <= a.tol and res.residual <= a.tol
    print(f"x_series = {sc.render(res.x_series)}", file=out)
    print(f"x_newton = {res.x_newton!r}", file=out)
    print(f"|x_series - x_newton| = {res.error:.3e}", file=out)
    print(f"residual = {res.residual:.3e}", file=out)
    payload = {"x_series": sc.render(res.x_series), "x_newton": res.x_newton,
               "error": res.error, "residual": res.residual, "certified_radius": radius}
    if a.g is not None:
        defect = lag_compose_check(a.u, a.g, t, z, a.order, radius)
        print(f"|L_u(g,z)(t) - g(x)| = {defect:.3e}", file=out)
        payload["compose_defect"] = defect
        ok = ok and defect <= a.tol
    payload["passed"] = ok
    _write_json(a.json, payload)
    return EXIT_OK if ok else EXIT_FAIL


def _cmd_tree(a, out) -> int:
    if a.order < 0:
        raise UsageError("--order must be non-negative")
    coeffs = lambert_w_coeffs(a.order) if a.lambert else tree_coeffs(a.order)
    print(", ".join(sc.render(c) for c in coeffs), file=out)
    _write_json(a.json, {"series": "lambert_w" if a.lambert else "tree",
                         "coefficients": [sc.render(c) for c in coeffs]})
    return EXIT_OK


def _cmd_radius(a, out) -> int:
    try:
        seg = Segment(*a.interval)
        g = a.g if a.g is not None else a.u
        S = a.S if a.S is not None else a.R
        N_u = level_exact(a.u, seg, a.R).value
        N_g = level_exact(g, seg, S).value
        cert = certificate(a.R, S, N_u, N_g, a.rho)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    data = asdict(cert)
    for key, val in data.items():
        print(f"{key:12s} {val!r}", file=out)
    _write_json(a.json, data)
    return EXIT_OK


COMMANDS = {"verify": _cmd_verify, "invert": _cmd_invert, "tree": _cmd_tree, "radius": _cmd_radius}


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        a = _build_parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return COMMANDS[a.command](a, out)
    except (UsageError, NonRationalError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DivergenceError, ConvergenceError, RadiusError) as exc:
        print(f"failed: {exc}", file=sys.stderr)
        return EXIT_FAIL


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
