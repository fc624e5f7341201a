"""Exact arithmetic in cyclotomic fields Q(zeta_n).

A :class:`CycNum` stores rational coordinates in the power basis
``1, zeta_n, ..., zeta_n^(phi(n)-1)`` with ``zeta_n = exp(2 pi i / n)``.
Values are always normalized to the smallest conductor whose field contains
them, so equal numbers have identical representations.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Any, Sequence

import mpmath
import sympy

from . import numeric, upoly
from .algnum import AlgNum, cyclotomic_coeffs

__all__ = ["CycNum"]


def _reduce(coeffs: Sequence[Fraction], n: int) -> list[Fraction]:
    """Reduce a polynomial in zeta_n modulo Phi_n, padded to length phi(n)."""
    phi = cyclotomic_coeffs(n)
    r = upoly.rem(list(coeffs), list(phi)) if len(coeffs) >= len(phi) else upoly.trim(coeffs)
    return list(r) + [Fraction(0)] * (len(phi) - 1 - len(r))


def _lift(coeffs: Sequence[Fraction], n: int, big: int) -> list[Fraction]:
    step = big // n
    out = [Fraction(0)] * (step * (len(coeffs) - 1) + 1 if coeffs else 0)
    for i, c in enumerate(coeffs):
        out[i * step] += c
    return _reduce(out, big)


@lru_cache(maxsize=1024)
def _subfield_basis(d: int, n: int) -> tuple[tuple[Fraction, ...], ...]:
    """Images of 1, zeta_d, ... in Q(zeta_n) coordinates."""
    phi_d = len(cyclotomic_coeffs(d)) - 1
    return tuple(tuple(_lift([Fraction(0)] * j + [Fraction(1)], d, n)) for j in range(phi_d))


def _solve(columns: Sequence[Sequence[Fraction]], target: Sequence[Fraction]) -> list[Fraction] | None:
    """Exact solution of sum x_j * columns[j] = target, or None."""
    rows, cols = len(target), len(columns)
    m = [[columns[j][i] for j in range(cols)] + [target[i]] for i in range(rows)]
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    if any(all(v == 0 for v in row[:-1]) and row[-1] != 0 for row in m):
        return None
    x = [Fraction(0)] * cols
    for i, c in enumerate(pivots):
        x[c] = m[i][-1]
    return x


def _divisors(n: int) -> list[int]:
    return sorted(int(d) for d in sympy.divisors(n))


class CycNum:
    """Element of a cyclotomic field, normalized to its minimal conductor."""

    __slots__ = ("conductor", "coords", "_hash")

    def __init__(self, coeffs: Sequence[Any], conductor: int = 1):
        if conductor < 1:
            raise ValueError("conductor must be positive")
        coords = _reduce([Fraction(c) for c in coeffs], conductor)
        n, coords = _minimize(conductor, coords)
        self.conductor = n
        self.coords: tuple[Fraction, ...] = tuple(coords)
        self._hash: int | None = None

    @classmethod
    def zeta(cls, n: int, k: int = 1) -> CycNum:
        """zeta_n ** k."""
        k %= n
        return cls([0] * k + [1], n)

    @classmethod
    def rational(cls, value: Any) -> CycNum:
        return cls([Fraction(value)], 1)

    @classmethod
    def coerce(cls, value: Any) -> CycNum:
        if isinstance(value, CycNum):
            return value
        if isinstance(value, (int, Fraction)):
            return cls.rational(value)
        raise TypeError(f"cannot coerce {value!r} to CycNum")

    def _aligned(self, other: CycNum) -> tuple[int, list[Fraction], list[Fraction]]:
        n = lcm(self.conductor, other.conductor)
        return n, _lift(self.coords, self.conductor, n), _lift(other.coords, other.conductor, n)

    def __add__(self, other: Any) -> CycNum:
        try:
            other = CycNum.coerce(other)
        except TypeError:
            return NotImplemented
        n, a, b = self._aligned(other)
        return CycNum(upoly.add(a, b), n)

    __radd__ = __add__

    def __neg__(self) -> CycNum:
        return CycNum([-c for c in self.coords], self.conductor)

    def __sub__(self, other: Any) -> CycNum:
        try:
            other = CycNum.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Any) -> CycNum:
        return CycNum.coerce(other) - self

    def __mul__(self, other: Any) -> CycNum:
        try:
            other = CycNum.coerce(other)
        except TypeError:
            return NotImplemented
        n, a, b = self._aligned(other)
        return CycNum(upoly.mul(a, b), n)

    __rmul__ = __mul__

    def inverse(self) -> CycNum:
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        g, s, _ = upoly.ext_gcd(list(self.coords), list(cyclotomic_coeffs(self.conductor)))
        return CycNum(s, self.conductor)

    def __truediv__(self, other: Any) -> CycNum:
        return self * CycNum.coerce(other).inverse()

    def __rtruediv__(self, other: Any) -> CycNum:
        return CycNum.coerce(other) * self.inverse()

    def __pow__(self, k: int) -> CycNum:
        if k < 0:
            return self.inverse() ** (-k)
        result, base = CycNum.rational(1), self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def conjugate(self) -> CycNum:
        """Complex conjugation, zeta -> zeta^-1."""
        n = self.conductor
        out = [Fraction(0)] * n
        for i, c in enumerate(self.coords):
            out[(-i) % n] += c
        return CycNum(out, n)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = CycNum.rational(other)
        if not isinstance(other, CycNum):
            return NotImplemented
        return self.conductor == other.conductor and self.coords == other.coords

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.conductor, self.coords))
        return self._hash

    def is_zero(self) -> bool:
        return not any(self.coords)

    def is_rational(self) -> bool:
        return self.conductor == 1

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is irrational")
        return self.coords[0]

    def approx(self) -> mpmath.mpc:
        with mpmath.workdps(numeric.DPS + numeric.GUARD):
            z = mpmath.expjpi(mpmath.mpf(2) / self.conductor)
            return numeric.evaluate(self.coords, z)

    def minimal_polynomial(self) -> tuple[Fraction, ...]:
        return self.to_algnum().minpoly

    def to_algnum(self) -> AlgNum:
        if self.is_rational():
            return AlgNum.rational(self.to_fraction())
        from .numberfield import NumberField
        field = NumberField(cyclotomic_coeffs(self.conductor), _zeta_approx(self.conductor))
        return AlgNum.from_approx(field(self.coords).minimal_polynomial(), self.approx())

    def to_json(self) -> dict[str, Any]:
        return {"conductor": self.conductor, "coords": [str(c) for c in self.coords]}

    def __str__(self) -> str:
        if self.is_rational():
            return str(self.to_fraction())
        terms = [f"{c}*z{self.conductor}^{i}" if i else str(c) for i, c in enumerate(self.coords) if c]
        return " + ".join(terms)

    def __repr__(self) -> str:
        return f"CycNum({self})"


def _zeta_approx(n: int) -> mpmath.mpc:
    with mpmath.workdps(numeric.DPS + numeric.GUARD):
        return mpmath.expjpi(mpmath.mpf(2) / n)


def _minimize(n: int, coords: list[Fraction]) -> tuple[int, list[Fraction]]:
    if n == 1:
        return 1, coords[:1] if coords else [Fraction(0)]
    for d in _divisors(n):
        if d == n:
            break
        if d % 4 == 2:
            continue
        sol = _solve(_subfield_basis(d, n), coords)
        if sol is not None:
            return (1, sol[:1]) if d == 1 else (d, sol)
    return n, coords
