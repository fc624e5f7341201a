"""Trace polynomials of words in the rank-two free group.

Every word ``w`` in ``a, b`` has ``tr rho(w) = P(tr a, tr b, tr ab)`` for a
unique integer polynomial ``P`` in the Fricke coordinates ``x, y, z``.  It is
computed from the identity ``tr(UV) = tr U tr V - tr(U V^-1)`` applied in two
ways: peeling an inverse letter off the end, and collapsing a doubled
letter ``tr(XXW) = tr X tr(XW) - tr W``.  Only ``(ab)^k`` survives, and that
is a Chebyshev polynomial in ``z``.
"""
from __future__ import annotations

from typing import Sequence

from .algebra.cyclotomic import CycNum
from .algebra.poly import Poly
from .errors import BudgetExceededError
from .words import Word

__all__ = [
    "TraceContext", "trace_poly", "trace_poly_linear", "chebyshev", "chebyshev_power_trace",
    "orbifold_character_components", "commutator_trace_identity", "gluing_factorization",
    "X", "Y", "Z",
]

X, Y, Z = Poly.var("x"), Poly.var("y"), Poly.var("z")
TERM_BUDGET = 10 ** 6


def chebyshev(n: int, var: Poly | str = "z") -> Poly:
    """p_n(t) with p_0 = 2, p_1 = t, p_{k+1} = t p_k - p_{k-1}: tr(A^n) from tr A."""
    t = Poly.var(var) if isinstance(var, str) else var
    n = abs(n)
    prev, cur = Poly.const(2), t
    if n == 0:
        return prev
    for _ in range(n - 1):
        prev, cur = cur, t * cur - prev
    return cur


def chebyshev_power_trace(q: int) -> Poly:
    """tr((ab)^q) as a polynomial in z = tr ab."""
    if not isinstance(q, int) or q < 1:
        raise ValueError("q must be a positive integer")
    return chebyshev(q, "z")


class TraceContext:
    """Memo table for one computation; safe to discard, never shared globally."""

    def __init__(self, generators: Sequence[str] = ("a", "b"), budget: int = TERM_BUDGET):
        if len(generators) != 2:
            raise ValueError("trace polynomials are defined for two generators")
        self.gens = tuple(generators)
        self.budget = budget
        self.memo: dict[str, Poly] = {}

    def _check(self, p: Poly) -> Poly:
        if len(p) > self.budget:
            raise BudgetExceededError(f"trace polynomial exceeds {self.budget} terms")
        return p

    def trace(self, word: Word | str) -> Poly:
        w = Word.parse(word) if isinstance(word, str) else word
        extra = w.generators() - set(self.gens)
        if extra:
            raise ValueError(f"word uses generators outside {self.gens}: {sorted(extra)}")
        # Rename to the internal alphabet a, b.
        g1, g2 = self.gens
        table = str.maketrans({g1: "a", g1.upper(): "A", g2: "b", g2.upper(): "B"})
        return self._trace(w.letters.translate(table))

    def _trace(self, letters: str) -> Poly:
        w = Word(letters).cyclically_reduced().letters
        key = Word(w).canonical_cyclic()
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        result = self._check(self._compute(key))
        self.memo[key] = result
        return result

    def _compute(self, w: str) -> Poly:
        if not w:
            return Poly.const(2)
        kinds = set(w.lower())
        if len(kinds) == 1:
            # a^n or b^n (the canonical key never mixes signs of one letter)
            return chebyshev(len(w), X if "a" in kinds else Y)
        # orient so inverse letters are the minority; peeling then strictly
        # lowers min(#inverse, #positive)
        if sum(ch.isupper() for ch in w) * 2 > len(w):
            w = Word(w).inverse().letters
        inv_pos = next((i for i, ch in enumerate(w) if ch.isupper()), None)
        if inv_pos is not None:
            # rotate so the word ends in an inverse letter: w ~ U X^-1
            r = w[inv_pos + 1:] + w[:inv_pos + 1]
            u, last = r[:-1], r[-1].lower()
            return self._trace(u) * self._trace(last) - self._trace(u + last)
        for i in range(len(w)):
            r = w[i:] + w[:i]
            if r[0] == r[1]:
                xl, rest = r[0], r[2:]
                return self._trace(xl) * self._trace(xl + rest) - self._trace(rest)
        # alternating positive word: (ab)^k
        return chebyshev(len(w) // 2, Z)


def trace_poly(word: Word | str, context: TraceContext | None = None) -> Poly:
    """Fricke polynomial of ``tr(word)`` in ``x = tr a, y = tr b, z = tr ab``."""
    return (context or TraceContext()).trace(word)


def trace_poly_linear(word: Word | str, budget: int = TERM_BUDGET) -> Poly:
    """Same polynomial as :func:`trace_poly`, in time linear in the word length.

    Every word equals ``alpha + beta a + gamma b + delta ab`` in the algebra
    spanned by the images of a rank-two free group in ``SL_2``, with
    coefficients in ``Z[x, y, z]``; right multiplication by a letter is a
    linear update of the four coefficients.
    """
    w = Word.parse(word) if isinstance(word, str) else word
    extra = w.generators() - {"a", "b"}
    if extra:
        raise ValueError(f"word uses generators outside ('a', 'b'): {sorted(extra)}")
    zero = Poly()
    al, be, ga, de = Poly.const(1), zero, zero, zero
    for ch in w.letters:
        if ch in "aA":
            na = (-be + ga * (Z - X * Y) - de * Y,
                  al + X * be + Y * ga + Z * de,
                  X * ga + de,
                  -ga)
            if ch == "A":  # a^-1 = x - a
                na = (X * al - na[0], X * be - na[1], X * ga - na[2], X * de - na[3])
        else:
            na = (-ga, -de, al + Y * ga, be + Y * de)
            if ch == "B":  # b^-1 = y - b
                na = (Y * al - na[0], Y * be - na[1], Y * ga - na[2], Y * de - na[3])
        al, be, ga, de = na
        if max(len(al), len(be), len(ga), len(de)) > budget:
            raise BudgetExceededError(f"trace polynomial exceeds {budget} terms")
    return al * 2 + X * be + Y * ga + Z * de


def orbifold_character_components(q: int) -> set[CycNum]:
    """Values zeta + zeta^-1 over the q-th roots of unity zeta."""
    if not isinstance(q, int) or q < 2:
        raise ValueError("q must be an integer >= 2")
    return {CycNum.zeta(q, k) + CycNum.zeta(q, -k) for k in range(q // 2 + 1)}


def commutator_trace_identity() -> tuple[Poly, Poly]:
    """``trace_poly(abAB)`` next to the closed form x^2 + y^2 + z^2 - xyz - 2."""
    return trace_poly("abAB"), X ** 2 + Y ** 2 + Z ** 2 - X * Y * Z - 2


def gluing_factorization() -> tuple[Poly, Poly]:
    """Both sides of the gluing identity for two characters sharing x and y."""
    zp = Poly.var("zp")
    lhs = (X ** 2 + Y ** 2 + Z ** 2 - X * Y * Z) - (X ** 2 + Y ** 2 + zp ** 2 - X * Y * zp)
    rhs = (Z - zp) * (Z + zp - X * Y)
    return lhs, rhs


def fricke_values(a: object, b: object) -> dict[str, object]:
    """(x, y, z) of a pair of matrices, for evaluating trace polynomials."""
    return {"x": a.trace(), "y": b.trace(), "z": (a * b).trace()}  # type: ignore[attr-defined]

