"""Algebraic numbers: an irreducible minimal polynomial plus a chosen root.

Two numbers are equal exactly when their minimal polynomials agree and they
name the same root.  Roots are named by their position in a deterministic
ordering of the numerically computed roots (real roots first, ascending,
then the rest by real and imaginary part).  The numerics only choose among
the finitely many exact candidates; a certified isolating box from sympy's
root isolation is available on request.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Any, Sequence

import mpmath
import sympy

from ..errors import CertificationError
from . import numeric, upoly
from .poly import Poly, resultant

__all__ = ["AlgNum", "is_root_of_unity", "cyclotomic_coeffs"]

Box = tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]


@lru_cache(maxsize=4096)
def _ordered_roots(minpoly: tuple[Fraction, ...]) -> tuple[mpmath.mpc, ...]:
    roots = numeric.rational_roots(minpoly)
    n_real = sympy.Poly(list(reversed([sympy.Rational(c.numerator, c.denominator) for c in minpoly])),
                        sympy.Symbol("x")).count_roots() if len(minpoly) > 2 else 1
    with mpmath.workdps(numeric.DPS + numeric.GUARD):
        by_im = sorted(roots, key=lambda r: abs(r.imag))
        real = sorted((mpmath.mpc(r.real, 0) for r in by_im[:n_real]), key=lambda r: r.real)
        rest = sorted(by_im[n_real:], key=lambda r: (mpmath.nint(r.real * 10 ** 40), r.imag))
    return tuple(real + rest)


def _factor_dense(p: Poly, name: str) -> list[tuple[Fraction, ...]]:
    out = []
    for f, _ in p.factor_list()[1]:
        cs = f.coefficients_in(name)
        dense = [Fraction(0)] * (max(cs) + 1)
        for k, c in cs.items():
            dense[k] = c.constant_value()
        out.append(tuple(c / dense[-1] for c in dense))
    return out


def _select(factors: Sequence[tuple[Fraction, ...]], target: mpmath.mpc) -> AlgNum:
    """The unique root among all factors closest to ``target``."""
    best: list[tuple[mpmath.mpf, tuple[Fraction, ...], int]] = []
    for f in factors:
        for i, r in enumerate(_ordered_roots(f)):
            with mpmath.workdps(numeric.DPS + numeric.GUARD):
                best.append((abs(r - target), f, i))
    best.sort(key=lambda t: t[0])
    if len(best) > 1 and not best[0][0] < best[1][0] / 4:
        raise CertificationError("cannot separate candidate roots at working precision")
    return AlgNum(best[0][1], best[0][2])


class AlgNum:
    """Exact algebraic number."""

    __slots__ = ("minpoly", "index", "_hash")

    def __init__(self, minpoly: Sequence[Any], index: int = 0):
        cs = upoly.trim([Fraction(c) for c in minpoly])
        if len(cs) < 2:
            raise ValueError("minimal polynomial must have positive degree")
        self.minpoly: tuple[Fraction, ...] = tuple(c / cs[-1] for c in cs)
        if not 0 <= index < len(cs) - 1:
            raise ValueError(f"root index {index} out of range")
        self.index = index
        self._hash: int | None = None

    # -- constructors -------------------------------------------------
    @classmethod
    def rational(cls, value: Any) -> AlgNum:
        return cls((-Fraction(value), Fraction(1)))

    @classmethod
    def coerce(cls, value: Any) -> AlgNum:
        if isinstance(value, AlgNum):
            return value
        if isinstance(value, (int, Fraction)):
            return cls.rational(value)
        if hasattr(value, "to_algnum"):
            return value.to_algnum()
        if hasattr(value, "minimal_polynomial") and hasattr(value, "approx"):
            return cls.from_approx(value.minimal_polynomial(), value.approx())
        raise TypeError(f"cannot make an algebraic number from {value!r}")

    @classmethod
    def from_approx(cls, poly: Sequence[Any], approx: Any) -> AlgNum:
        """The root of ``poly`` (any rational polynomial) nearest ``approx``."""
        p = Poly.from_univariate([Fraction(c) for c in poly], "y")
        if p.degree("y") < 1:
            raise ValueError("polynomial has no roots")
        return _select(_factor_dense(p, "y"), numeric.to_mpc(approx))

    @classmethod
    def roots_of(cls, poly: Sequence[Any]) -> list[tuple[AlgNum, int]]:
        """All distinct roots with multiplicities."""
        p = Poly.from_univariate([Fraction(c) for c in poly], "y")
        out = []
        for f, k in p.factor_list()[1]:
            dense = _factor_dense(f, "y")[0]
            out.extend((AlgNum(dense, i), k) for i in range(len(dense) - 1))
        return out

    # -- queries ------------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.minpoly) - 1

    def is_rational(self) -> bool:
        return self.degree == 1

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is irrational")
        return -self.minpoly[0]

    def is_zero(self) -> bool:
        return self.is_rational() and self.minpoly[0] == 0

    def approx(self) -> mpmath.mpc:
        if self.is_rational():
            return numeric.to_mpc(self.to_fraction())
        return _ordered_roots(self.minpoly)[self.index]

    def box(self) -> Box:
        """Rational rectangle certified by sympy to isolate this root."""
        if self.is_rational():
            c = self.to_fraction()
            return (c, Fraction(0)), (c, Fraction(0))
        return _box(self.minpoly, self.index)

    # -- arithmetic ---------------------------------------------------
    def _combine(self, other: AlgNum, op: str) -> AlgNum:
        with mpmath.workdps(numeric.DPS + numeric.GUARD):
            a, b = self.approx(), other.approx()
            target = {"+": a + b, "*": a * b}[op]
        s, y = Poly.var("s"), Poly.var("y")
        f = Poly.from_univariate(self.minpoly, "y")
        g = other.minpoly
        if op == "+":
            gs = sum(((s - y) ** k * c for k, c in enumerate(g)), Poly())
        else:
            d = len(g) - 1
            gs = sum((s ** k * y ** (d - k) * c for k, c in enumerate(g)), Poly())
        res = resultant(f, gs, "y")
        return _select(_factor_dense(res, "s"), target)

    def __add__(self, other: Any) -> AlgNum:
        other = AlgNum.coerce(other)
        if other.is_rational():
            if self.is_rational():
                return AlgNum.rational(self.to_fraction() + other.to_fraction())
            c = other.to_fraction()
            shifted = upoly.compose(list(self.minpoly), [-c, Fraction(1)])
            return _select([tuple(shifted)], self.approx() + numeric.to_mpc(c))
        if self.is_rational():
            return other + self
        return self._combine(other, "+")

    __radd__ = __add__

    def __neg__(self) -> AlgNum:
        d = self.degree
        flipped = [c * (-1) ** (d - k) for k, c in enumerate(self.minpoly)]
        return _select([tuple(flipped)], -self.approx())

    def __sub__(self, other: Any) -> AlgNum:
        return self + (-AlgNum.coerce(other))

    def __rsub__(self, other: Any) -> AlgNum:
        return AlgNum.coerce(other) - self

    def __mul__(self, other: Any) -> AlgNum:
        other = AlgNum.coerce(other)
        if other.is_rational():
            c = other.to_fraction()
            if c == 0:
                return AlgNum.rational(0)
            if self.is_rational():
                return AlgNum.rational(self.to_fraction() * c)
            d = self.degree
            scaled = [a * c ** (d - k) for k, a in enumerate(self.minpoly)]
            return _select([tuple(scaled)], self.approx() * numeric.to_mpc(c))
        if self.is_rational():
            return other * self
        return self._combine(other, "*")

    __rmul__ = __mul__

    def inverse(self) -> AlgNum:
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        if self.is_rational():
            return AlgNum.rational(1 / self.to_fraction())
        with mpmath.workdps(numeric.DPS + numeric.GUARD):
            target = 1 / self.approx()
        return _select([tuple(reversed(self.minpoly))], target)

    def __truediv__(self, other: Any) -> AlgNum:
        return self * AlgNum.coerce(other).inverse()

    def __rtruediv__(self, other: Any) -> AlgNum:
        return AlgNum.coerce(other) * self.inverse()

    def __pow__(self, k: int) -> AlgNum:
        if k < 0:
            return self.inverse() ** (-k)
        result, base = AlgNum.rational(1), self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = AlgNum.rational(other)
        if not isinstance(other, AlgNum):
            return NotImplemented
        return self.minpoly == other.minpoly and self.index == other.index

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.minpoly, self.index))
        return self._hash

    # -- squares ------------------------------------------------------
    def square_root_in_own_field(self) -> bool:
        """True when this number is a square in Q(self)."""
        if self.is_rational():
            c = self.to_fraction()
            return c >= 0 and _is_rational_square(c)
        y = Poly.var("y")
        lifted = sum((y ** (2 * k) * c for k, c in enumerate(self.minpoly)), Poly())
        return any(len(f) - 1 == self.degree for f in _factor_dense(lifted, "y"))

    # -- text ---------------------------------------------------------
    def to_json(self) -> dict[str, Any]:
        (rx0, ix0), (rx1, ix1) = self.box()
        return {
            "minpoly": [str(c) for c in self.minpoly],
            "root_index": self.index,
            "box": [[str(rx0), str(ix0)], [str(rx1), str(ix1)]],
            "approx": _approx_text(self.approx()),
        }

    def __str__(self) -> str:
        if self.is_rational():
            return str(self.to_fraction())
        return f"root#{self.index} of {Poly.from_univariate(self.minpoly, 't')}"

    def __repr__(self) -> str:
        return f"AlgNum({self})"


def _approx_text(z: mpmath.mpc, digits: int = 20) -> str:
    with mpmath.workdps(digits + 5):
        re_, im_ = mpmath.nstr(z.real, digits), mpmath.nstr(z.imag, digits)
    return re_ if z.imag == 0 else f"{re_}{'' if im_.startswith('-') else '+'}{im_}i"


def _is_rational_square(c: Fraction) -> bool:
    from math import isqrt
    n, d = c.numerator, c.denominator
    return n >= 0 and isqrt(n) ** 2 == n and isqrt(d) ** 2 == d


@lru_cache(maxsize=1024)
def _box(minpoly: tuple[Fraction, ...], index: int) -> Box:
    x = sympy.Symbol("x")
    poly = sympy.Poly(list(reversed([sympy.Rational(c.numerator, c.denominator) for c in minpoly])), x)
    target = _ordered_roots(minpoly)[index]
    eps = sympy.Rational(1, 4)
    for _ in range(60):
        real, cplx = poly.intervals(all=True, eps=eps)
        boxes = [((a, 0), (b, 0)) for (a, b), _ in real]
        boxes += [((sympy.re(lo), sympy.im(lo)), (sympy.re(hi), sympy.im(hi))) for (lo, hi), _ in cplx]
        hits = [b for b in boxes if _inside(target, *b)]
        if len(hits) == 1:
            (ax, ay), (bx, by) = hits[0]
            return (_q(ax), _q(ay)), (_q(bx), _q(by))
        eps /= 16
    raise CertificationError("could not certify an isolating box")


def _q(v: Any) -> Fraction:
    r = sympy.Rational(v)
    return Fraction(int(r.p), int(r.q))


def _inside(z: mpmath.mpc, lo: tuple[Any, Any], hi: tuple[Any, Any]) -> bool:
    f = lambda v: mpmath.mpf(_q(v).numerator) / _q(v).denominator  # noqa: E731
    with mpmath.workdps(numeric.DPS + numeric.GUARD):
        eps = mpmath.mpf(10) ** (-numeric.DPS)
        return (f(lo[0]) - eps <= z.real <= f(hi[0]) + eps) and (f(lo[1]) - eps <= z.imag <= f(hi[1]) + eps)


@lru_cache(maxsize=256)
def cyclotomic_coeffs(n: int) -> tuple[Fraction, ...]:
    """Coefficients of the n-th cyclotomic polynomial, constant term first."""
    p = sympy.Poly(sympy.cyclotomic_poly(n, sympy.Symbol("x")), sympy.Symbol("x"))
    return tuple(Fraction(int(c)) for c in reversed(p.all_coeffs()))


def is_root_of_unity(a: AlgNum) -> int | None:
    """Exact multiplicative order of ``a`` if it is a root of unity."""
    if not isinstance(a, AlgNum):
        raise TypeError("expected an AlgNum")
    d = a.degree
    if a.is_rational():
        c = a.to_fraction()
        return 1 if c == 1 else 2 if c == -1 else None
    if a.minpoly[0] not in (1, -1) or any(c.denominator != 1 for c in a.minpoly):
        return None
    # phi(n) >= sqrt(n/2), so phi(n) = d forces n <= 2 d^2
    for n in range(3, 2 * d * d + 3):
        if sympy.totient(n) == d and cyclotomic_coeffs(n) == a.minpoly:
            return n
    return None
