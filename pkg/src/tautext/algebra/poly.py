"""Sparse multivariate polynomials with rational coefficients.

A :class:`Poly` keeps its variables sorted and drops every variable that does
not occur, so two polynomials are equal exactly when their term maps agree.
The canonical text form doubles as an on-disk cache key::

    [x,y,z] -x*y*z + x^2 + y^2 + z^2 - 2
"""
from __future__ import annotations

import re
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from numbers import Rational
from typing import Any, Iterable, Iterator, Mapping

import sympy

from ..errors import DegenerateResultantError, ParseError

Exps = tuple[int, ...]

__all__ = ["Poly", "resultant", "as_poly"]


def _frac(value: Any) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, sympy.Rational):
        return Fraction(int(value.p), int(value.q))
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"not a rational coefficient: {value!r}")


class Poly:
    """Immutable polynomial over Q in named variables."""

    __slots__ = ("_vars", "_terms", "_hash")

    def __init__(self, terms: Mapping[Exps, Any] | None = None, variables: Iterable[str] = ()):
        names = tuple(variables)
        if len(set(names)) != len(names):
            raise ValueError(f"repeated variable in {names}")
        raw: dict[Exps, Fraction] = {}
        for exps, c in (terms or {}).items():
            if len(exps) != len(names):
                raise ValueError(f"exponent vector {exps} does not match variables {names}")
            if any(e < 0 for e in exps):
                raise ValueError(f"negative exponent in {exps}")
            c = _frac(c)
            if c:
                exps = tuple(int(e) for e in exps)
                raw[exps] = raw.get(exps, Fraction(0)) + c
        raw = {e: c for e, c in raw.items() if c}
        used = [i for i in range(len(names)) if any(e[i] for e in raw)]
        order = sorted(used, key=lambda i: names[i])
        self._vars: tuple[str, ...] = tuple(names[i] for i in order)
        self._terms: dict[Exps, Fraction] = {tuple(e[i] for i in order): c for e, c in raw.items()}
        self._hash: int | None = None

    # -- constructors -------------------------------------------------
    @classmethod
    def _raw(cls, variables: tuple[str, ...], terms: dict[Exps, Fraction]) -> Poly:
        # Trusted fast path: variables sorted, no zero coefficients.
        p = object.__new__(cls)
        p._vars, p._terms, p._hash = variables, terms, None
        if any(not any(e[i] for e in terms) for i in range(len(variables))):
            return Poly(terms, variables)
        return p

    @classmethod
    def var(cls, name: str) -> Poly:
        return cls._raw((name,), {(1,): Fraction(1)})

    @classmethod
    def const(cls, value: Any) -> Poly:
        c = _frac(value)
        return cls._raw((), {(): c} if c else {})

    @classmethod
    def monomial(cls, exps: Mapping[str, int], coeff: Any = 1) -> Poly:
        names = tuple(exps)
        return cls({tuple(exps[n] for n in names): coeff}, names)

    @classmethod
    def from_univariate(cls, coeffs: Iterable[Any], name: str) -> Poly:
        """Build from a dense coefficient list, constant term first."""
        return cls({(k,): c for k, c in enumerate(coeffs)}, (name,))

    # -- basic accessors ----------------------------------------------
    @property
    def variables(self) -> tuple[str, ...]:
        return self._vars

    @property
    def terms(self) -> Mapping[Exps, Fraction]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[Exps, Fraction]]:
        return iter(self._terms.items())

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._vars

    def constant_value(self) -> Fraction:
        if self._vars:
            raise ValueError(f"{self} is not constant")
        return self._terms.get((), Fraction(0))

    def degree(self, name: str | None = None) -> int:
        """Degree in ``name`` (total degree when omitted); -1 for zero."""
        if not self._terms:
            return -1
        if name is None:
            return max(sum(e) for e in self._terms)
        if name not in self._vars:
            return 0
        i = self._vars.index(name)
        return max(e[i] for e in self._terms)

    def low_degree(self, name: str) -> int:
        if not self._terms or name not in self._vars:
            return 0
        i = self._vars.index(name)
        return min(e[i] for e in self._terms)

    def exponents(self, names: Iterable[str]) -> list[tuple[int, ...]]:
        idx = [self._vars.index(n) if n in self._vars else None for n in names]
        return [tuple(0 if i is None else e[i] for i in idx) for e in self._terms]

    # -- alignment ----------------------------------------------------
    def _lift(self, names: tuple[str, ...]) -> dict[Exps, Fraction]:
        if names == self._vars:
            return self._terms
        pos = [names.index(v) for v in self._vars]
        out = {}
        for e, c in self._terms.items():
            full = [0] * len(names)
            for i, k in zip(pos, e):
                full[i] = k
            out[tuple(full)] = c
        return out

    @staticmethod
    def _union(a: Poly, b: Poly) -> tuple[str, ...]:
        if a._vars == b._vars:
            return a._vars
        return tuple(sorted(set(a._vars) | set(b._vars)))

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other: Any) -> Poly:
        other = as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        names = Poly._union(self, other)
        out = dict(self._lift(names))
        for e, c in other._lift(names).items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return Poly._raw(names, out)

    __radd__ = __add__

    def __neg__(self) -> Poly:
        return Poly._raw(self._vars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other: Any) -> Poly:
        other = as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Any) -> Poly:
        return as_poly(other) - self

    def __mul__(self, other: Any) -> Poly:
        other = as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_constant():
            c = other.constant_value()
            if not c:
                return Poly()
            return Poly._raw(self._vars, {e: v * c for e, v in self._terms.items()})
        names = Poly._union(self, other)
        a, b = self._lift(names), other._lift(names)
        out: dict[Exps, Fraction] = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                out[e] = out.get(e, 0) + ca * cb
        return Poly._raw(names, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> Poly:
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result, base = Poly.const(1), self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __truediv__(self, other: Any) -> Poly:
        """Division by a nonzero rational only; see :meth:`exact_div`."""
        c = _frac(other)
        if not c:
            raise ZeroDivisionError("division by zero")
        return self * (1 / c)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self._vars == other._vars and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._vars, frozenset(self._terms.items())))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self._terms)

    # -- calculus and substitution -------------------------------------
    def diff(self, name: str) -> Poly:
        if name not in self._vars:
            return Poly()
        i = self._vars.index(name)
        out = {}
        for e, c in self._terms.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                out[tuple(f)] = c * e[i]
        return Poly(out, self._vars)

    def coefficients_in(self, name: str) -> dict[int, Poly]:
        """Split as sum_k c_k * name^k with c_k free of ``name``."""
        if name not in self._vars:
            return {0: self} if self else {}
        i = self._vars.index(name)
        rest = self._vars[:i] + self._vars[i + 1:]
        buckets: dict[int, dict[Exps, Fraction]] = {}
        for e, c in self._terms.items():
            buckets.setdefault(e[i], {})[e[:i] + e[i + 1:]] = c
        return {k: Poly(t, rest) for k, t in buckets.items()}

    def leading_coefficient(self, name: str) -> Poly:
        return self.coefficients_in(name).get(self.degree(name), Poly())

    def subs(self, mapping: Mapping[str, Any]) -> Poly:
        """Substitute rationals or polynomials for variables (exact)."""
        relevant = {k: as_poly(v) for k, v in mapping.items() if k in self._vars}
        if not relevant:
            return self
        keep = [i for i, n in enumerate(self._vars) if n not in relevant]
        sub_idx = [(i, relevant[n]) for i, n in enumerate(self._vars) if n in relevant]
        powers: dict[tuple[int, int], Poly] = {}

        def power(i: int, base: Poly, k: int) -> Poly:
            key = (i, k)
            if key not in powers:
                powers[key] = base ** k
            return powers[key]

        total = Poly()
        grouped: dict[tuple[int, ...], dict[Exps, Fraction]] = {}
        for e, c in self._terms.items():
            sig = tuple(e[i] for i, _ in sub_idx)
            grouped.setdefault(sig, {})[tuple(e[i] for i in keep)] = c
        rest_names = tuple(self._vars[i] for i in keep)
        for sig, part in grouped.items():
            factor = Poly.const(1)
            for (i, base), k in zip(sub_idx, sig):
                if k:
                    factor = factor * power(i, base, k)
            total = total + Poly(part, rest_names) * factor
        return total

    def evaluate(self, values: Mapping[str, Any]) -> Any:
        """Evaluate in any commutative ring supporting ``+``, ``*``, ``**``."""
        missing = [n for n in self._vars if n not in values]
        if missing:
            raise KeyError(f"no value for {missing}")
        vals = [values[n] for n in self._vars]
        cache: dict[tuple[int, int], Any] = {}
        total: Any = 0
        for e, c in self._terms.items():
            term: Any = c if c.denominator != 1 else int(c)
            for i, k in enumerate(e):
                if k:
                    key = (i, k)
                    if key not in cache:
                        cache[key] = vals[i] ** k
                    term = term * cache[key]
            total = total + term
        return total

    def rename(self, mapping: Mapping[str, str]) -> Poly:
        return Poly(self._terms, tuple(mapping.get(n, n) for n in self._vars))

    # -- normalization ------------------------------------------------
    def content(self) -> Fraction:
        """Positive rational c with self / c integral and primitive."""
        if not self._terms:
            return Fraction(0)
        num = reduce(gcd, (c.numerator for c in self._terms.values()))
        den = reduce(lcm, (c.denominator for c in self._terms.values()))
        return Fraction(abs(num), den)

    def leading_term(self) -> tuple[Exps, Fraction]:
        """Largest term in graded-lex order."""
        e = max(self._terms, key=lambda x: (sum(x), x))
        return e, self._terms[e]

    def primitive(self) -> Poly:
        """Divide by content and make the graded-lex leading coefficient positive."""
        if not self._terms:
            return self
        c = self.content()
        if self.leading_term()[1] < 0:
            c = -c
        return self / c

    def monomial_gcd(self) -> dict[str, int]:
        if not self._terms:
            return {}
        return {n: min(e[i] for e in self._terms) for i, n in enumerate(self._vars)}

    def strip_monomial(self) -> Poly:
        g = self.monomial_gcd()
        shift = tuple(g[n] for n in self._vars)
        return Poly({tuple(a - b for a, b in zip(e, shift)): c for e, c in self._terms.items()}, self._vars)

    def normalized(self) -> Poly:
        """Content-free, monomial-free, positive leading coefficient."""
        return self.strip_monomial().primitive()

    # -- sympy bridge -------------------------------------------------
    def to_sympy(self, gens: Iterable[str] | None = None) -> sympy.Poly:
        names = tuple(gens) if gens is not None else self._vars
        if not names:
            names = ("_c",)
        missing = set(self._vars) - set(names)
        if missing:
            raise ValueError(f"generators {names} miss {missing}")
        syms = [sympy.Symbol(n) for n in names]
        rep = {e: sympy.Rational(c.numerator, c.denominator) for e, c in self._lift(names).items()}
        return sympy.Poly.from_dict(rep or {(0,) * len(names): 0}, *syms, domain=sympy.QQ)

    @classmethod
    def from_sympy(cls, obj: Any) -> Poly:
        if not isinstance(obj, sympy.Poly):
            expr = sympy.sympify(obj)
            free = sorted(expr.free_symbols, key=lambda s: s.name)
            if not free:
                return cls.const(_frac(sympy.Rational(expr)))
            obj = sympy.Poly(expr, *free, domain=sympy.QQ)
        names = tuple(str(g) for g in obj.gens)
        dom = obj.get_domain()
        terms = {}
        for e, c in obj.terms():
            c = dom.to_sympy(c) if not isinstance(c, sympy.Basic) else c
            terms[e] = _frac(sympy.Rational(c))
        if names == ("_c",):
            return cls.const(terms.get((0,), 0))
        return cls(terms, names)

    # -- factorization helpers (over Q) ---------------------------------
    def factor_list(self) -> tuple[Fraction, list[tuple[Poly, int]]]:
        if self.is_constant():
            return self.constant_value(), []
        c, facs = self.to_sympy().factor_list()
        return _frac(sympy.Rational(c)), [(Poly.from_sympy(f).primitive(), k) for f, k in facs]

    def squarefree_part(self) -> Poly:
        if self.is_constant():
            return Poly.const(1) if self else self
        return Poly.from_sympy(self.to_sympy().sqf_part()).primitive()

    def gcd(self, other: Poly) -> Poly:
        names = Poly._union(self, other) or ("_c",)
        g = self.to_sympy(names).gcd(other.to_sympy(names))
        return Poly.from_sympy(g).primitive()

    def exact_div(self, other: Poly) -> Poly:
        """Quotient when ``other`` divides ``self``; raises otherwise."""
        names = Poly._union(self, other) or ("_c",)
        q, r = self.to_sympy(names).div(other.to_sympy(names))
        if not r.is_zero:
            raise ArithmeticError(f"{other} does not divide {self}")
        return Poly.from_sympy(q)

    def divides(self, other: Poly) -> bool:
        names = Poly._union(self, other) or ("_c",)
        return other.to_sympy(names).rem(self.to_sympy(names)).is_zero

    # -- text ---------------------------------------------------------
    def _sorted_terms(self) -> list[tuple[Exps, Fraction]]:
        return sorted(self._terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    def to_text(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for e, c in self._sorted_terms():
            mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(self._vars, e) if k)
            mag = abs(c)
            if mono and mag == 1:
                body = mono
            else:
                coeff = str(mag.numerator) if mag.denominator == 1 else f"{mag.numerator}/{mag.denominator}"
                body = f"{coeff}*{mono}" if mono else coeff
            if not parts:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append((" - " if c < 0 else " + ") + body)
        return "".join(parts)

    def serialize(self) -> str:
        return f"[{','.join(self._vars)}] {self.to_text()}"

    @classmethod
    def deserialize(cls, text: str) -> Poly:
        m = re.fullmatch(r"\[([^\]]*)\] (.*)", text.strip())
        if not m:
            raise ParseError(f"not a canonical polynomial: {text!r}")
        names = tuple(n for n in m.group(1).split(",") if n)
        body = m.group(2)
        if body == "0":
            return cls()
        terms: dict[Exps, Fraction] = {}
        for sign, term in re.findall(r"(^-|\s[+-]\s|^)([^\s]+)", body):
            e = [0] * len(names)
            coeff = Fraction(1)
            for factor in term.split("*"):
                if re.fullmatch(r"\d+(/\d+)?", factor):
                    coeff = Fraction(factor)
                    continue
                name, _, k = factor.partition("^")
                if name not in names:
                    raise ParseError(f"unknown variable {name!r} in {text!r}")
                e[names.index(name)] += int(k) if k else 1
            if sign.strip() == "-":
                coeff = -coeff
            terms[tuple(e)] = terms.get(tuple(e), 0) + coeff
        return cls(terms, names)

    @classmethod
    def parse(cls, text: str) -> Poly:
        """Parse canonical text or a free-form expression such as ``x^2 - x*y``."""
        text = text.strip()
        if text.startswith("["):
            return cls.deserialize(text)
        from sympy.parsing.sympy_parser import (
            convert_xor, implicit_multiplication_application, parse_expr, standard_transformations)
        try:
            expr = parse_expr(text, transformations=standard_transformations
                              + (implicit_multiplication_application, convert_xor))
        except Exception as exc:  # sympy raises a zoo of exception types
            raise ParseError(f"cannot parse {text!r}: {exc}") from exc
        return cls.from_sympy(sympy.expand(expr))

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"Poly('{self.serialize()}')"


def as_poly(value: Any) -> Poly:
    if isinstance(value, Poly):
        return value
    if isinstance(value, (int, Fraction, Rational)):
        return Poly.const(value)
    return NotImplemented


def resultant(p: Poly, q: Poly, var: str) -> Poly:
    """Sylvester resultant of ``p`` and ``q`` eliminating ``var``."""
    if p.is_zero() or q.is_zero():
        raise ValueError("resultant of a zero polynomial")
    dp, dq = p.degree(var), q.degree(var)
    if dp <= 0 and dq <= 0:
        raise DegenerateResultantError(f"neither polynomial involves {var!r}")
    rest = tuple(sorted((set(p.variables) | set(q.variables)) - {var}))
    gens = (var,) + rest
    res = p.to_sympy(gens).resultant(q.to_sympy(gens))
    if isinstance(res, sympy.Poly):
        return Poly.from_sympy(res)
    return Poly.const(_frac(sympy.Rational(res)))
