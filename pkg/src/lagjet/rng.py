"""Reproducible random instances.

Everything is drawn from :class:`random.Random` (Mersenne Twister, MT19937)
seeded with an integer, so a seed pins every generated jet, polynomial and
parameter across platforms and Python versions.
"""

from __future__ import annotations

import random
from fractions import Fraction

from . import scalar as sc
from .jet import Jet

NUM_RANGE = 6
DEN_MAX = 4
FLOAT_NUM_RANGE = 2


class InstanceRng:
    def __init__(self, seed: int):
        self.seed = seed
        self._r = random.Random(seed)

    def integer(self, lo: int, hi: int) -> int:
        return self._r.randint(lo, hi)

    def choice(self, seq):
        return self._r.choice(list(seq))

    def uniform(self, lo: float, hi: float) -> float:
        return self._r.uniform(lo, hi)

    def rational(self, nonzero: bool = False, min_abs: Fraction = Fraction(0), num: int = NUM_RANGE) -> Fraction:
        while True:
            q = Fraction(self._r.randint(-num, num), self._r.randint(1, DEN_MAX))
            if (q or not nonzero) and abs(q) >= min_abs:
                return q

    def rationals(self, k: int) -> list:
        return [self.rational() for _ in range(k)]

    def jet(self, order: int, backend: str = sc.EXACT, base_point=None, invertible: bool = False) -> Jet:
        """Jet with small random rational derivative values."""
        t0 = self.rational() if base_point is None else base_point
        # float instances stay small with |f(t0)| >= 1 so that the cancelling
        # sums in the identities remain well conditioned
        if backend == sc.FLOAT:
            floor, num = (1 if invertible else 0), FLOAT_NUM_RANGE
        else:
            floor, num = 0, NUM_RANGE
        vals = [self.rational(nonzero=invertible, min_abs=floor, num=num)]
        vals += [self.rational(num=num) for _ in range(order)]
        return Jet(t0, tuple(vals), backend)

    def jets(self, k: int, order: int, backend: str = sc.EXACT, invertible: bool = False) -> list:
        """``k`` jets sharing one base point."""
        t0 = self.rational()
        return [self.jet(order, backend, t0, invertible) for _ in range(k)]

    def polynomial(self, degree: int) -> list:
        """Ascending rational coefficients with a nonzero leading term."""
        return self.rationals(degree) + [self.rational(nonzero=True)]
