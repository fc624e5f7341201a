"""Truncated Laurent series in one local parameter over a number field."""
from __future__ import annotations

from fractions import Fraction
from typing import Any

from .algebra.numberfield import FieldElem, NumberField

__all__ = ["LaurentSeries"]


class LaurentSeries:
    """``sum c_k t^k`` for ``k >= start``, known modulo ``t^prec``.

    ``prec is None`` marks an exact (finite) series.  Leading zero
    coefficients are stripped so ``start`` is the valuation whenever any
    coefficient is known to be nonzero.
    """

    __slots__ = ("field", "start", "coeffs", "prec")

    def __init__(self, field: NumberField, terms: dict[int, Any] | None = None, prec: int | None = None):
        self.field = field
        terms = {k: field(v) if not isinstance(v, FieldElem) else v for k, v in (terms or {}).items()}
        keys = [k for k, v in terms.items() if not v.is_zero() and (prec is None or k < prec)]
        if keys:
            lo, hi = min(keys), max(keys)
            self.start = lo
            self.coeffs = tuple(terms.get(k, field.zero()) for k in range(lo, hi + 1))
        else:
            self.start = prec if prec is not None else 0
            self.coeffs = ()
        self.prec = prec

    # -- constructors -------------------------------------------------
    @classmethod
    def constant(cls, field: NumberField, value: Any) -> LaurentSeries:
        return cls(field, {0: value})

    @classmethod
    def monomial(cls, field: NumberField, coeff: Any, exp: int) -> LaurentSeries:
        return cls(field, {exp: coeff})

    def terms(self) -> dict[int, FieldElem]:
        return {self.start + i: c for i, c in enumerate(self.coeffs) if not c.is_zero()}

    # -- queries ------------------------------------------------------
    def is_exact(self) -> bool:
        return self.prec is None

    def is_zero(self) -> bool:
        """Exactly zero (only decidable for exact series)."""
        return self.prec is None and not self.coeffs

    def valuation(self) -> int | None:
        """Order of vanishing, or None when no known coefficient is nonzero."""
        if self.coeffs:
            return self.start
        return None

    def coefficient(self, k: int) -> FieldElem:
        if self.prec is not None and k >= self.prec:
            raise ValueError(f"coefficient of t^{k} is beyond the precision t^{self.prec}")
        i = k - self.start
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self.field.zero()

    # -- arithmetic ---------------------------------------------------
    def _coerce(self, other: Any) -> LaurentSeries:
        if isinstance(other, LaurentSeries):
            return other
        if isinstance(other, (int, Fraction, FieldElem)):
            return LaurentSeries.constant(self.field, other)
        return NotImplemented

    def __add__(self, other: Any) -> LaurentSeries:
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        prec = _min_prec(self.prec, o.prec)
        terms: dict[int, FieldElem] = dict(self.terms())
        for k, c in o.terms().items():
            terms[k] = terms[k] + c if k in terms else c
        return LaurentSeries(self.field, terms, prec)

    __radd__ = __add__

    def __neg__(self) -> LaurentSeries:
        return LaurentSeries(self.field, {k: -c for k, c in self.terms().items()}, self.prec)

    def __sub__(self, other: Any) -> LaurentSeries:
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other: Any) -> LaurentSeries:
        return (-self) + other

    def _lowest(self) -> int:
        """Lower bound for the valuation."""
        return self.start

    def __mul__(self, other: Any) -> LaurentSeries:
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        prec = _min_prec(None if self.prec is None else self.prec + o._lowest(),
                         None if o.prec is None else o.prec + self._lowest())
        terms: dict[int, FieldElem] = {}
        a, b = self.terms(), o.terms()
        for i, x in a.items():
            for j, y in b.items():
                k = i + j
                if prec is not None and k >= prec:
                    continue
                terms[k] = terms[k] + x * y if k in terms else x * y
        return LaurentSeries(self.field, terms, prec)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> LaurentSeries:
        if k < 0:
            raise ValueError("negative powers are not supported")
        result = LaurentSeries.constant(self.field, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def truncate(self, prec: int) -> LaurentSeries:
        return LaurentSeries(self.field, self.terms(), _min_prec(self.prec, prec))

    def substitute_power(self, coeff: FieldElem, q: int) -> LaurentSeries:
        """``f(coeff * t^q)`` for a positive integer ``q``."""
        terms = {q * k: c * coeff ** k for k, c in self.terms().items()}
        return LaurentSeries(self.field, terms, None if self.prec is None else q * self.prec)

    def lift(self, field: NumberField, embed) -> LaurentSeries:
        return LaurentSeries(field, {k: embed(c) for k, c in self.terms().items()}, self.prec)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return self.prec == other.prec and self.terms() == other.terms()

    def __hash__(self) -> int:
        return hash((self.prec, tuple(sorted(self.terms().items()))))

    def __repr__(self) -> str:
        body = " + ".join(f"({c!r})*t^{k}" for k, c in sorted(self.terms().items())) or "0"
        tail = "" if self.prec is None else f" + O(t^{self.prec})"
        return f"LaurentSeries({body}{tail})"


def _min_prec(a: int | None, b: int | None) -> int | None:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)

