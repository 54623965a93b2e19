"""Two scalar backends behind one small interface.

``exact`` values are :class:`fractions.Fraction`; ``float`` values are
binary64 floats. Arithmetic never compares with a hidden tolerance; callers
pass one to :func:`close` when they need a float comparison.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational

from .errors import BackendMismatchError

EXACT = "exact"
FLOAT = "float"
BACKENDS = (EXACT, FLOAT)


def check_backend(backend: str) -> str:
    if backend not in BACKENDS:
        raise ValueError(f"unknown backend {backend!r}; expected one of {BACKENDS}")
    return backend


def coerce(value, backend: str):
    """Convert ``value`` into the representation used by ``backend``.

    Floats are refused by the exact backend: silently rationalising a binary
    float would hide precision loss.
    """
    if backend == EXACT:
        if isinstance(value, bool):
            return Fraction(int(value))
        if isinstance(value, Fraction):
            return value
        if isinstance(value, Rational):
            return Fraction(value)
        if isinstance(value, str):
            return parse_rational(value)
        raise BackendMismatchError(
            f"exact backend requires a rational value, got {type(value).__name__}"
        )
    if backend == FLOAT:
        if isinstance(value, complex):
            raise BackendMismatchError("complex values are not supported")
        return float(value)
    check_backend(backend)


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"``, an integer, or a finite decimal into a Fraction."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational literal: {text!r}") from exc


def zero(backend: str):
    return Fraction(0) if backend == EXACT else 0.0


def one(backend: str):
    return Fraction(1) if backend == EXACT else 1.0


def is_zero(value, backend: str, tol: float = 0.0) -> bool:
    if backend == EXACT:
        return value == 0
    return abs(value) <= tol


def close(a, b, tol: float) -> bool:
    """Relative-or-absolute float comparison at a caller supplied tolerance."""
    scale = max(1.0, abs(float(a)), abs(float(b)))
    return abs(float(a) - float(b)) <= tol * scale


def render(value) -> str:
    """String form used in reports: ``p/q`` for rationals, ``repr`` for floats."""
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, float):
        return repr(value) if math.isfinite(value) else str(value)
    return str(value)


def ipow(base, exponent: int):
    """Integer power with the convention 0**0 == 1 on both backends."""
    if exponent == 0:
        return type(base)(1) if isinstance(base, (Fraction, float)) else 1
    return base**exponent
