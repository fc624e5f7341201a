"""Simple number fields Q(theta) with a fixed complex embedding.

Elements are exact coordinate vectors in the power basis of ``theta``; the
embedding is used only to tell conjugate roots apart.  Adjoining roots of
polynomials with coefficients in the field goes through a primitive element
``beta + k*theta``, and every adjunction is checked by exact substitution.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Any, Iterable, Sequence

import mpmath

from ..errors import CertificationError
from . import numeric, upoly
from .poly import Poly, resultant

__all__ = ["NumberField", "FieldElem", "RootExtension", "QQ", "squarefree_decomposition"]


def _monic_rational(coeffs: Iterable[Any]) -> tuple[Fraction, ...]:
    cs = upoly.trim([Fraction(c) for c in coeffs])
    if len(cs) < 2:
        raise ValueError("minimal polynomial must have positive degree")
    return tuple(c / cs[-1] for c in cs)


class NumberField:
    """Q(theta), theta the root of ``minpoly`` closest to ``root_hint``."""

    __slots__ = ("minpoly", "degree", "root", "__dict__")

    def __init__(self, minpoly: Sequence[Any], root_hint: Any = 0):
        self.minpoly = _monic_rational(minpoly)
        self.degree = len(self.minpoly) - 1
        roots = numeric.rational_roots(self.minpoly)
        idx, dist, second = numeric.nearest(roots, numeric.to_mpc(root_hint))
        if len(roots) > 1 and not dist < second / 4:
            raise CertificationError(f"root hint {root_hint} does not single out a root of {self.minpoly}")
        self.root = roots[idx]

    def __call__(self, value: Any) -> FieldElem:
        if isinstance(value, FieldElem):
            if value.field is not self:
                raise ValueError("element of a different field")
            return value
        if isinstance(value, (list, tuple)):
            return FieldElem(self, value)
        return FieldElem(self, [Fraction(value)])

    @cached_property
    def gen(self) -> FieldElem:
        if self.degree == 1:
            return FieldElem(self, [-self.minpoly[0]])
        return FieldElem(self, [0, 1])

    def zero(self) -> FieldElem:
        return FieldElem(self, [])

    def one(self) -> FieldElem:
        return FieldElem(self, [1])

    def is_rational_field(self) -> bool:
        return self.degree == 1

    def same_as(self, other: NumberField) -> bool:
        return self is other or (self.minpoly == other.minpoly and numeric.close(self.root, other.root))

    def __repr__(self) -> str:
        return f"NumberField({list(map(str, self.minpoly))}, root~{mpmath.nstr(self.root, 12)})"

    # -- root adjunction ----------------------------------------------
    def roots_of(self, coeffs: Sequence[Any]) -> list[RootExtension]:
        """Every complex root of a nonzero polynomial over this field.

        ``coeffs`` are constant term first.  Each root comes with the field
        it generates together with this one, the image of ``theta`` there,
        and its multiplicity.
        """
        poly = upoly.trim([self(c) for c in coeffs])
        if len(poly) < 2:
            return []
        out: list[RootExtension] = []
        for factor, mult in squarefree_decomposition(poly):
            if len(factor) < 2:
                continue
            for ext in self._roots_squarefree(factor):
                out.append(RootExtension(ext.field, ext.theta_image, ext.root, mult, self))
        return out

    def _bivariate(self, coeffs: Sequence[FieldElem], wname: str = "w") -> Poly:
        terms: dict[tuple[int, int], Fraction] = {}
        for j, c in enumerate(coeffs):
            for i, a in enumerate(c.coeffs):
                if a:
                    terms[(i, j)] = a
        return Poly(terms, ("t", wname))

    def _roots_squarefree(self, poly: list[FieldElem]) -> list[RootExtension]:
        theta_poly = Poly.from_univariate(self.minpoly, "t")
        approx = numeric.complex_roots([c.approx() for c in poly])
        if self.degree == 1:
            norm = Poly.from_univariate([c.rational() for c in poly], "w")
        else:
            norm = resultant(theta_poly, self._bivariate(poly), "t")
        factors = [f for f, _ in norm.factor_list()[1]]
        dense = [_dense(f, "w") for f in factors]
        results = []
        for r in approx:
            g = min(dense, key=lambda d: abs(numeric.evaluate(d, r)) / (1 + abs(r)) ** (len(d) - 1))
            if len(g) == 2:
                beta = self(-g[0] / g[1])
                results.append(RootExtension(self, self.gen, beta, 1, self))
                continue
            common = upoly.gcd(poly, [self(c) for c in g])
            if len(common) == 2:
                results.append(RootExtension(self, self.gen, -common[0], 1, self))
                continue
            results.append(self._adjoin(common, r))
        return results

    def _adjoin(self, poly: list[FieldElem], r: mpmath.mpc) -> RootExtension:
        if self.degree == 1:
            field = NumberField([c.rational() for c in poly], r)
            return RootExtension(field, field(self.gen.rational()), field.gen, 1, self)
        theta_poly = Poly.from_univariate(self.minpoly, "t")
        bivar = self._bivariate(poly)
        t, s = Poly.var("t"), Poly.var("s")
        for k in _shifts():
            shifted = bivar.subs({"w": s - t * k})
            res = resultant(theta_poly, shifted, "t")
            if res.degree("s") != res.squarefree_part().degree("s"):
                continue
            target = r + k * self.root
            factors = [_dense(f, "s") for f, _ in res.factor_list()[1]]
            h = min(factors, key=lambda d: abs(numeric.evaluate(d, target)) / (1 + abs(target)) ** (len(d) - 1))
            field = NumberField(h, target)
            # theta is the common root of minpoly(t) and poly(t, theta' - k t) over the new field
            in_t = _dense_in(shifted, field, {"s": field.gen})
            common = upoly.gcd([field(c) for c in self.minpoly], in_t)
            if len(common) != 2:
                continue
            theta_img = -common[0]
            beta = field.gen - theta_img * k
            ext = RootExtension(field, theta_img, beta, 1, self)
            ext.verify(poly)
            return ext
        raise CertificationError("no primitive element found")  # pragma: no cover


def _shifts() -> Iterable[int]:
    yield 0
    for k in range(1, 64):
        yield k
        yield -k


def _dense(p: Poly, name: str) -> list[Fraction]:
    cs = p.coefficients_in(name)
    out = [Fraction(0)] * (max(cs) + 1 if cs else 0)
    for k, c in cs.items():
        out[k] = c.constant_value()
    return out


def _dense_in(p: Poly, field: NumberField, values: dict[str, FieldElem]) -> list[FieldElem]:
    """Coefficients in ``t`` of ``p`` after substituting field values for the rest."""
    out: list[FieldElem] = []
    for k, c in sorted(p.coefficients_in("t").items()):
        while len(out) < k:
            out.append(field.zero())
        val = c.evaluate({n: values[n] for n in c.variables}) if not c.is_constant() else c.constant_value()
        out.append(field(val) if not isinstance(val, FieldElem) else val)
    return upoly.trim(out)


@dataclass(frozen=True, eq=False)
class RootExtension:
    """A root of a polynomial over ``base`` living in ``field``."""

    field: NumberField
    theta_image: FieldElem
    root: FieldElem
    multiplicity: int
    base: NumberField

    def lift(self, value: Any) -> FieldElem:
        """Map an element of ``base`` into ``field``."""
        if isinstance(value, FieldElem):
            if self.field is value.field:
                return value
            acc = self.field.zero()
            for c in reversed(value.coeffs):
                acc = acc * self.theta_image + c
            return acc
        return self.field(value)

    def verify(self, poly: Sequence[Any]) -> None:
        lifted = [self.lift(c) for c in poly]
        if upoly.evaluate(lifted, self.root) != 0:
            raise CertificationError("adjoined root fails exact substitution")
        if upoly.evaluate([self.field(c) for c in self.base.minpoly], self.theta_image) != 0:
            raise CertificationError("embedding does not respect the minimal polynomial")


class FieldElem:
    """Exact element of a :class:`NumberField`."""

    __slots__ = ("field", "coeffs", "_hash", "_minpoly")

    def __init__(self, field: NumberField, coeffs: Sequence[Any]):
        cs = upoly.trim([Fraction(c) for c in coeffs])
        if len(cs) > field.degree:
            cs = upoly.rem(cs, list(field.minpoly))
        self.field = field
        self.coeffs: tuple[Fraction, ...] = tuple(cs)
        self._hash: int | None = None
        self._minpoly: tuple[Fraction, ...] | None = None

    def _coerce(self, other: Any) -> FieldElem | None:
        if isinstance(other, FieldElem):
            if other.field is not self.field:
                if other.field.same_as(self.field):
                    return FieldElem(self.field, other.coeffs)
                if other.field.degree == 1:
                    return FieldElem(self.field, [other.rational()])
                if self.field.degree == 1:
                    return None
                raise ValueError("mixing elements of different number fields")
            return other
        if isinstance(other, (int, Fraction)):
            return FieldElem(self.field, [other])
        return None

    def __add__(self, other: Any) -> FieldElem:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElem(self.field, upoly.add(self.coeffs, o.coeffs))

    __radd__ = __add__

    def __neg__(self) -> FieldElem:
        return FieldElem(self.field, [-c for c in self.coeffs])

    def __sub__(self, other: Any) -> FieldElem:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElem(self.field, upoly.sub(self.coeffs, o.coeffs))

    def __rsub__(self, other: Any) -> FieldElem:
        return (-self) + other

    def __mul__(self, other: Any) -> FieldElem:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if len(o.coeffs) <= 1:
            c = o.coeffs[0] if o.coeffs else 0
            return FieldElem(self.field, [x * c for x in self.coeffs])
        return FieldElem(self.field, upoly.mul(self.coeffs, o.coeffs))

    __rmul__ = __mul__

    def inverse(self) -> FieldElem:
        if not self.coeffs:
            raise ZeroDivisionError("inverse of zero")
        if len(self.coeffs) == 1:
            return FieldElem(self.field, [1 / self.coeffs[0]])
        g, s, _ = upoly.ext_gcd(list(self.coeffs), list(self.field.minpoly))
        if len(g) != 1:
            raise ZeroDivisionError("element is a zero divisor; minimal polynomial reducible?")
        return FieldElem(self.field, s)

    def __truediv__(self, other: Any) -> FieldElem:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other: Any) -> FieldElem:
        return self.inverse() * other

    def __pow__(self, k: int) -> FieldElem:
        if k < 0:
            return self.inverse() ** (-k)
        result, base = self.field.one(), self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.coeffs == tuple(upoly.trim([Fraction(other)]))
        if isinstance(other, FieldElem):
            o = self._coerce(other)
            if o is None:
                return other == self
            return self.coeffs == o.coeffs
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.coeffs) if self.is_rational() else hash((self.field.minpoly, self.coeffs))
        return self._hash

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_rational(self) -> bool:
        return len(self.coeffs) <= 1

    def rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is irrational")
        return self.coeffs[0] if self.coeffs else Fraction(0)

    def approx(self) -> mpmath.mpc:
        with mpmath.workdps(numeric.DPS + numeric.GUARD):
            return numeric.evaluate(self.coeffs, self.field.root)

    def minimal_polynomial(self) -> tuple[Fraction, ...]:
        """Monic minimal polynomial over Q, constant term first."""
        if self._minpoly is None:
            self._minpoly = self._compute_minpoly()
        return self._minpoly

    def _compute_minpoly(self) -> tuple[Fraction, ...]:
        if self.is_rational():
            return (-self.rational(), Fraction(1))
        t, y = Poly.var("t"), Poly.var("y")
        a = sum((t ** i * c for i, c in enumerate(self.coeffs)), Poly())
        res = resultant(Poly.from_univariate(self.field.minpoly, "t"), y - a, "t")
        factors = [_dense(f, "y") for f, _ in res.factor_list()[1]]
        target = self.approx()
        best = min(factors, key=lambda d: abs(numeric.evaluate(d, target)) / (1 + abs(target)) ** (len(d) - 1))
        return _monic_rational(best)

    def __repr__(self) -> str:
        if self.is_rational():
            return f"FieldElem({self.rational()})"
        terms = " + ".join(f"{c}*th^{i}" for i, c in enumerate(self.coeffs) if c)
        return f"FieldElem({terms})"


QQ = NumberField([0, 1], 0)


def squarefree_decomposition(f: Sequence[Any]) -> list[tuple[list, int]]:
    """Yun's algorithm over a field: f = lc * prod a_i^i with a_i squarefree."""
    f = upoly.monic(f)
    if len(f) < 2:
        return []
    out = []
    df = upoly.derivative(f)
    b = upoly.gcd(f, df)
    c = upoly.divmod_(f, b)[0]
    d = upoly.sub(upoly.divmod_(df, b)[0], upoly.derivative(c))
    i = 1
    while len(c) > 1:
        a = upoly.gcd(c, d)
        if len(a) > 1:
            out.append((a, i))
        c = upoly.divmod_(c, a)[0]
        d = upoly.sub(upoly.divmod_(d, a)[0], upoly.derivative(c))
        i += 1
    return out
