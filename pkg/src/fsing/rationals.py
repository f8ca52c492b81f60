"""Exact rational grid points and the snapping rules for jumping numbers.

All candidate limits have the shape c / (q^a * (q^b - 1)): a is the preperiod
and b the period of the eventually periodic base-q digit stream.  Two entry
points:

* `snap_interval` picks the smallest-denominator candidate inside a half-open
  grid interval (used when only one grid level is available, e.g. F-jumping
  exponent scans).
* `detect_chain_limit` fits the linear recurrence m_{e+b} = q^b m_e + c to a
  chain of S_e numerators and returns the exact limit (used by the jumping
  number estimator).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .polyring import CharConfig


def frac_ceil(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


@dataclass(frozen=True)
class GridRational:
    """The grid point m / q^{e+1}, kept exact."""

    m: int
    e: int
    cfg: CharConfig

    def __post_init__(self):
        if not (0 < self.m <= self.cfg.q ** (self.e + 1)):
            raise ValueError(
                f"grid numerator {self.m} outside (0, q^{self.e + 1}]"
            )

    @property
    def value(self) -> Fraction:
        return Fraction(self.m, self.cfg.q ** (self.e + 1))

    def __str__(self) -> str:
        v = self.value
        return f"{v.numerator}/{v.denominator}"


def snap_interval(
    lo: Fraction, hi: Fraction, q: int, max_a: int, max_b: int
) -> Optional[Fraction]:
    """Smallest-denominator rational c/(q^a (q^b - 1)) in (lo, hi].

    Ties between reduced candidates of equal denominator break toward the
    larger value.  Returns None when no candidate fits in the window.
    """
    candidates = []
    for a in range(max_a + 1):
        for b in range(1, max_b + 1):
            den = q**a * (q**b - 1)
            c_hi = (hi.numerator * den) // hi.denominator
            c_lo = (lo.numerator * den) // lo.denominator
            for c in range(c_lo + 1, c_hi + 1):
                val = Fraction(c, den)
                if lo < val <= hi:
                    candidates.append(val)
    if not candidates:
        return None
    return min(candidates, key=lambda v: (v.denominator, -v))


@dataclass(frozen=True)
class ChainFit:
    """A detected eventually-periodic digit stream and its exact limit."""

    limit: Fraction
    preperiod: int  # absolute level a: the recurrence holds for e >= a
    period: int


def detect_chain_limit(
    numerators: Sequence[int], start_e: int, cfg: CharConfig, max_a: int, max_b: int
) -> Optional[ChainFit]:
    """Fit m_{e+b} = q^b m_e + c to numerators[i] = m at level start_e + i.

    Scans periods b and preperiods a smallest-first and requires at least two
    consistent equations before accepting.  The limit of m_e / q^{e+1} is
    then (m_a (q^b - 1) + c) / (q^{a+1} (q^b - 1)).
    """
    q = cfg.q
    n = len(numerators)
    for b in range(1, max_b + 1):
        for a in range(max_a + 1):
            last = n - b - 1
            if last - a < 1:
                continue  # fewer than two equations to check
            c = numerators[a + b] - q**b * numerators[a]
            if all(
                numerators[i + b] - q**b * numerators[i] == c
                for i in range(a + 1, last + 1)
            ):
                level = start_e + a
                limit = Fraction(
                    numerators[a] * (q**b - 1) + c, q ** (level + 1) * (q**b - 1)
                )
                if 0 < limit <= 1:
                    return ChainFit(limit, level, b)
    return None
