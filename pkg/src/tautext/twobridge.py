"""Two-bridge knots: Riley representations, character curves and A-polynomials.

A two-bridge knot ``p/q`` (``p`` odd) has the presentation ``<a, b | wa = bw>``
with ``w = a^e1 b^e2 a^e3 ...`` (``p - 1`` letters) and
``e_i = (-1)^floor(i q / p)``.  Nonabelian representations are conjugate to

    rho(a) = [[M, 1], [0, 1/M]],   rho(b) = [[M, 0], [u, 1/M]]

and ``1/M`` is carried as the auxiliary variable ``Mb`` with ``M * Mb = 1``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd

from .algebra.poly import Poly, resultant
from .errors import BudgetExceededError, LongitudeError, ParseError
from .matrix import Mat2, evaluate_word
from .trace import TERM_BUDGET, chebyshev
from .words import Word

__all__ = [
    "TwoBridgeKnot", "SymMatrix", "CharCurve", "laurent_reduce", "riley_representation",
    "riley_polynomial", "character_curve", "a_polynomial", "slope_word", "M", "MB", "U", "L",
]

M, MB, U, L = Poly.var("M"), Poly.var("Mb"), Poly.var("u"), Poly.var("L")

NAMED_KNOTS = {
    "unknot": (1, 1),
    "trefoil": (3, 1),
    "3_1": (3, 1),
    "figure-eight": (5, 3),
    "figure8": (5, 3),
    "4_1": (5, 3),
    "5_2": (7, 3),
}

_J = re.compile(r"J\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)")
_FRACTION = re.compile(r"(-?\d+)\s*/\s*(-?\d+)")


@dataclass(frozen=True)
class TwoBridgeKnot:
    """The two-bridge knot ``p/q`` with ``p > 0`` odd and ``q`` odd, ``0 < q < 2p``."""

    p: int
    q: int
    label: str = ""

    def __post_init__(self) -> None:
        p, q = self.p, self.q
        if p <= 0:
            raise ParseError(f"p must be positive, got {p}")
        if p % 2 == 0:
            raise ParseError(f"{p}/{q} is a two-component link, not a knot")
        if gcd(p, q) != 1:
            raise ParseError(f"{p}/{q} is not in lowest terms")
        if q % 2 == 0:
            q += p
        q %= 2 * p
        object.__setattr__(self, "q", q)
        if not self.label:
            object.__setattr__(self, "label", f"{p}/{q}")

    @classmethod
    def parse(cls, text: str) -> TwoBridgeKnot:
        """Accepts ``J(b1,b2)``, ``p/q`` or a catalog name such as ``figure-eight``."""
        s = text.strip()
        key = s.lower()
        if key in NAMED_KNOTS:
            p, q = NAMED_KNOTS[key]
            return cls(p, q, s)
        m = _J.fullmatch(s)
        if m:
            return cls.from_j(int(m.group(1)), int(m.group(2)), s)
        m = _FRACTION.fullmatch(s)
        if m:
            p, q = int(m.group(1)), int(m.group(2))
            if p < 0:
                p, q = -p, -q
            if p == 0:
                raise ParseError(f"zero numerator in {text!r}")
            return cls(p, q, s)
        raise ParseError(f"cannot parse knot {text!r}; expected J(b1,b2), p/q or a catalog name")

    @classmethod
    def from_j(cls, b1: int, b2: int, label: str = "") -> TwoBridgeKnot:
        """``J(b1, b2)`` has determinant ``|b1 b2 - 1|``; it is a knot when that is odd."""
        d = b1 * b2 - 1
        if d == 0:
            raise ParseError(f"J({b1},{b2}) is degenerate")
        p, q = (d, b2) if d > 0 else (-d, -b2)
        return cls(p, q, label or f"J({b1},{b2})")

    def is_unknot(self) -> bool:
        return self.p == 1

    @cached_property
    def epsilons(self) -> tuple[int, ...]:
        return tuple(-1 if (i * self.q // self.p) % 2 else 1 for i in range(1, self.p))

    @cached_property
    def relator_word(self) -> Word:
        """``w`` in ``wa = bw``."""
        letters = []
        for i, e in enumerate(self.epsilons):
            g = "a" if i % 2 == 0 else "b"
            letters.append(g if e > 0 else g.upper())
        return Word("".join(letters))

    @cached_property
    def relator(self) -> Word:
        """``w a w^-1 b^-1``, trivial in the knot group."""
        w = self.relator_word
        return w * "a" * w.inverse() * "B"

    @cached_property
    def longitude(self) -> Word:
        """Null-homologous longitude commuting with the meridian ``a``."""
        if self.p < 1 or len(self.epsilons) != self.p - 1:
            raise LongitudeError(f"longitude word derivation failed for {self.label}")
        w = self.relator_word
        sigma = sum(self.epsilons)
        # reversing w is the same as reading the opposite letter order of the epsilon sequence
        ell = Word(w.letters[::-1]) * w * Word.power_of("a", -2 * sigma)
        if ell.exponent_sum("a") + ell.exponent_sum("b") != 0:
            raise LongitudeError(f"longitude word derivation failed for {self.label}")
        return ell

    def __str__(self) -> str:
        return self.label


# -- Laurent arithmetic in M with Mb = 1/M ---------------------------------------------

def laurent_reduce(p: Poly) -> Poly:
    """Normal form modulo ``M * Mb - 1``: no monomial contains both."""
    if "M" not in p.variables or "Mb" not in p.variables:
        return p
    names = p.variables
    i, j = names.index("M"), names.index("Mb")
    out: dict[tuple[int, ...], Fraction] = {}
    for e, c in p.items():
        f = list(e)
        k = min(f[i], f[j])
        f[i] -= k
        f[j] -= k
        t = tuple(f)
        out[t] = out.get(t, Fraction(0)) + c
    return Poly(out, names)


def laurent_coefficients(p: Poly, var: str = "M", inv: str = "Mb") -> dict[int, Poly]:
    """Split a reduced Laurent polynomial as ``sum_k c_k M^k`` with ``k`` in Z."""
    out: dict[int, Poly] = {}
    for k, c in laurent_reduce(p).coefficients_in(var).items():
        for j, d in c.coefficients_in(inv).items():
            if k and j:
                raise ValueError("polynomial is not Laurent-reduced")
            e = k - j
            out[e] = out.get(e, Poly()) + d
    return {k: v for k, v in out.items() if v}


def clear_denominator(p: Poly) -> Poly:
    """``M^k * p`` rewritten as an honest polynomial in ``M`` (smallest such ``k``)."""
    parts = laurent_coefficients(p)
    if not parts:
        return Poly()
    low = min(parts)
    return sum((c * M ** (k - low) for k, c in parts.items()), Poly())


class SymMatrix(Mat2):
    """2x2 matrix of polynomials in ``M, Mb, u`` kept reduced modulo ``M Mb = 1``."""

    @classmethod
    def reduce(cls, m: Mat2) -> SymMatrix:
        return cls(*(laurent_reduce(e) for e in m.entries()))

    def det_is_one(self) -> bool:
        return laurent_reduce(self.det()) == Poly.const(1)


def riley_representation(knot: TwoBridgeKnot | None = None) -> tuple[SymMatrix, SymMatrix]:
    """Images of the meridians ``a`` and ``b``; the same for every two-bridge knot."""
    one, zero = Poly.const(1), Poly()
    return SymMatrix(M, one, zero, MB), SymMatrix(M, zero, U, MB)


def _budgeted(budget: int):
    def normalize(m: Mat2) -> Mat2:
        m = SymMatrix.reduce(m)
        if max(len(e) for e in m.entries()) > budget:
            raise BudgetExceededError(f"matrix entry exceeds {budget} terms")
        return m
    return normalize


def evaluate_riley(word: Word | str, budget: int = TERM_BUDGET) -> SymMatrix:
    a, b = riley_representation()
    return SymMatrix.reduce(evaluate_word(word, {"a": a, "b": b}, normalize=_budgeted(budget)))


# -- curves ------------------------------------------------------------------------

@dataclass(frozen=True)
class CharCurve:
    """A plane curve given by a squarefree primitive polynomial in two chart variables."""

    defining: Poly
    chart: tuple[str, str]

    @property
    def tag(self) -> str:
        return "riley" if self.chart == ("M", "u") else "fricke" if self.chart == ("x", "z") else "plane"

    @classmethod
    def of(cls, poly: Poly, chart: tuple[str, str]) -> CharCurve:
        extra = set(poly.variables) - set(chart)
        if extra:
            raise ValueError(f"curve polynomial uses {sorted(extra)} outside chart {chart}")
        p = poly.squarefree_part().primitive() if not poly.is_constant() else poly
        return cls(p, tuple(chart))

    def to_json(self) -> dict[str, object]:
        return {"chart": list(self.chart), "defining": self.defining.serialize()}


def riley_laurent(knot: TwoBridgeKnot, budget: int = TERM_BUDGET) -> Poly:
    """``(W A - B W)_12 = w11 + (Mb - M) w12`` as a reduced Laurent polynomial."""
    w = evaluate_riley(knot.relator_word, budget)
    return laurent_reduce(w.a + (MB - M) * w.b)


def riley_polynomial(knot: TwoBridgeKnot, budget: int = TERM_BUDGET) -> CharCurve:
    """Nonabelian representation locus in the (M, u) chart."""
    return CharCurve.of(clear_denominator(riley_laurent(knot, budget)), ("M", "u"))


def _symmetric_in_x(p: Poly) -> Poly:
    """Rewrite a Laurent polynomial invariant under ``M -> 1/M`` in ``x = M + 1/M``."""
    parts = laurent_coefficients(p)
    if any(parts.get(-k, Poly()) != c for k, c in parts.items()):
        raise ValueError("Laurent polynomial is not symmetric under M -> 1/M")
    x = Poly.var("x")
    total = parts.get(0, Poly())
    for k, c in parts.items():
        if k > 0:
            total = total + c * chebyshev(k, x)
    return total


def character_curve(knot: TwoBridgeKnot, budget: int = TERM_BUDGET) -> CharCurve:
    """The Riley curve in Fricke coordinates ``x = tr a``, ``z = tr ab`` (``y = x``)."""
    phi = riley_laurent(knot, budget)
    swapped = laurent_reduce(phi.rename({"M": "Mb", "Mb": "M"}))
    if swapped == phi:
        sym = phi
    elif swapped == -phi:
        # odd under inversion: divide out the antisymmetric factor M - 1/M
        sym = laurent_reduce(phi * (M - MB))
    else:
        sym = laurent_reduce(phi * swapped)
    in_x = _symmetric_in_x(sym)
    x, z = Poly.var("x"), Poly.var("z")
    curve = in_x.subs({"u": z - x ** 2 + 2})
    return CharCurve.of(curve, ("x", "z"))


def a_polynomial(knot: TwoBridgeKnot, budget: int = TERM_BUDGET) -> Poly:
    """A-polynomial in ``(M, L)``: the eliminant of the Riley polynomial and ``rho(l)_11 - L``.

    Unit monomials, rational content, factors free of ``L`` and the abelian factor
    ``L - 1`` are removed; the result is squarefree with positive leading term.
    """
    if knot.is_unknot():
        return Poly.const(1)
    riley = riley_polynomial(knot, budget).defining
    ell = evaluate_riley(knot.longitude, budget)
    eig = clear_denominator(laurent_reduce(ell.a - L))
    res = resultant(riley, eig, "u")
    if len(res) > budget:
        raise BudgetExceededError(f"eliminant exceeds {budget} terms")
    if res.is_zero():
        raise LongitudeError(f"longitude of {knot} gives a degenerate eliminant")
    _, factors = res.factor_list()
    keep = Poly.const(1)
    for f, _mult in factors:
        if "L" not in f.variables:
            continue
        if f == (L - 1).primitive():
            continue
        keep = keep * f
    return keep.normalized()


def slope_word(knot: TwoBridgeKnot, slope: Fraction | int | None) -> Word:
    """Peripheral word whose eigenvalue is ``M^-p L^q`` for the slope ``p/q``.

    With the Newton-polygon convention of :mod:`tautext.algebra.newton`, the edge of
    slope ``p/q`` is where ``M^-p L^q`` tends to a constant; ``None`` is the meridian.
    """
    if slope is None:
        return Word("a")
    r = Fraction(slope)
    return Word.power_of("a", -r.numerator) * knot.longitude ** r.denominator
