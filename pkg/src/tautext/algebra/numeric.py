"""High-precision complex embeddings used to pick out roots.

Numerics only ever *select* among finitely many exact candidates; equality
decisions are made exactly elsewhere.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Any, Sequence

import mpmath

DPS = 60
GUARD = 30


def to_mpc(value: Any) -> mpmath.mpc:
    if isinstance(value, Fraction):
        return mpmath.mpc(mpmath.mpf(value.numerator) / value.denominator)
    if hasattr(value, "approx"):
        return value.approx()
    return mpmath.mpc(value)


def evaluate(coeffs: Sequence[Any], x: mpmath.mpc) -> mpmath.mpc:
    acc = mpmath.mpc(0)
    for c in reversed(coeffs):
        acc = acc * x + to_mpc(c)
    return acc


def _roots(coeffs: Sequence[Any]) -> list[mpmath.mpc]:
    deg = len(coeffs) - 1
    if deg < 1:
        return []
    with mpmath.workdps(DPS + GUARD):
        cs = [to_mpc(c) for c in reversed(coeffs)]
        if deg == 1:
            return [-cs[1] / cs[0]]
        if deg == 2:
            a, b, c = cs
            d = mpmath.sqrt(b * b - 4 * a * c)
            return [(-b + d) / (2 * a), (-b - d) / (2 * a)]
        roots = mpmath.polyroots(cs, maxsteps=400 + 40 * deg, extraprec=40 * deg + 2 * DPS)
        return [mpmath.mpc(r) for r in roots]


@lru_cache(maxsize=4096)
def rational_roots(coeffs: tuple[Fraction, ...]) -> tuple[mpmath.mpc, ...]:
    """All complex roots of a squarefree rational polynomial (constant term first)."""
    return tuple(_roots(coeffs))


def complex_roots(coeffs: Sequence[Any]) -> list[mpmath.mpc]:
    """Roots of a squarefree polynomial with coefficients that know ``approx``."""
    if all(isinstance(c, Fraction) for c in coeffs):
        return list(rational_roots(tuple(coeffs)))
    return _roots(coeffs)


def nearest(candidates: Sequence[mpmath.mpc], target: mpmath.mpc) -> tuple[int, mpmath.mpf, mpmath.mpf]:
    """Index of the closest candidate, its distance, and the runner-up distance."""
    with mpmath.workdps(DPS + GUARD):
        dists = [abs(c - target) for c in candidates]
    order = sorted(range(len(dists)), key=lambda i: dists[i])
    second = dists[order[1]] if len(order) > 1 else mpmath.inf
    return order[0], dists[order[0]], second


def close(a: mpmath.mpc, b: mpmath.mpc, digits: int = DPS // 2) -> bool:
    with mpmath.workdps(DPS + GUARD):
        scale = max(1, abs(a), abs(b))
        return abs(a - b) <= scale * mpmath.mpf(10) ** (-digits)
