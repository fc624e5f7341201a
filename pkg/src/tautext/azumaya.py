"""Tautological-extension verdicts and quaternion-symbol witnesses.

An irreducible limiting character certifies that the quaternion algebra of
the curve extends over the ideal point; the witness is a pair ``(g, h)`` with
``tr[g, h] != 2``.  The algebra is then described by the Hilbert symbol
``(χ(g)² − 4, tr[g, h] − 2)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

import sympy

from .algebra.algnum import AlgNum
from .errors import PoleError
from .limiting import CharacterTable, commutator_value, missing_entries
from .words import Word

__all__ = [
    "QuaternionSymbol", "ExtensionVerdict", "extension_verdict", "symbol_is_split",
    "hilbert_symbol", "EXTENDS", "DOES_NOT_EXTEND", "UNDETERMINED",
    "SPLIT", "NONSPLIT", "UNKNOWN",
]

EXTENDS, DOES_NOT_EXTEND, UNDETERMINED = "extends", "does-not-extend", "undetermined"
SPLIT, NONSPLIT, UNKNOWN = "split", "nonsplit", "unknown"


@dataclass(frozen=True)
class QuaternionSymbol:
    """The Hilbert symbol ``(a, b)``, meaningful up to squares of the field."""

    a: AlgNum
    b: AlgNum

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", AlgNum.coerce(self.a))
        object.__setattr__(self, "b", AlgNum.coerce(self.b))
        if self.a.is_zero() or self.b.is_zero():
            raise ValueError("symbol entries must be nonzero")

    def as_tuple(self) -> tuple[AlgNum, AlgNum]:
        return self.a, self.b

    def to_json(self) -> dict[str, Any]:
        return {"a": self.a.to_json(), "b": self.b.to_json()}


@dataclass(frozen=True)
class ExtensionVerdict:
    status: str
    witness: tuple[Word, Word] | None = None
    symbol: QuaternionSymbol | None = None
    pairs: tuple[tuple[Word, Word], ...] = ()
    reason: str | None = None
    missing: tuple[Word, ...] = ()

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {"status": self.status}
        if self.witness is not None:
            out["witness"] = [str(w) for w in self.witness]
        if self.symbol is not None:
            out["symbol"] = self.symbol.to_json()
        if self.pairs:
            out["pairs"] = [[str(g), str(h)] for g, h in self.pairs]
        if self.reason is not None:
            out["reason"] = self.reason
        if self.missing:
            out["missing"] = [str(w) for w in self.missing]
        return out


def _symbol(t: CharacterTable, g: Word, h: Word, comm: AlgNum) -> QuaternionSymbol | None:
    b = comm - 2
    # a = χ(g)² − 4 must be nonzero; fall back to h or gh, which span the same algebra
    for w in (g, h, g * h):
        x = t[w]
        a = x * x - 4
        if not a.is_zero():
            return QuaternionSymbol(a, b)
    return None


def extension_verdict(t: CharacterTable, generating_pairs: Sequence[tuple[Word | str, Word | str]]
                      ) -> ExtensionVerdict:
    """Extends on an irreducible witness pair; DoesNotExtend if every pair is reducible."""
    if not generating_pairs:
        raise ValueError("at least one generating pair is required")
    pairs = tuple((Word.parse(g), Word.parse(h)) for g, h in generating_pairs)
    missing: list[Word] = []
    poles: list[str] = []
    for g, h in pairs:
        gap = missing_entries(t, [(g, h)])
        if gap:
            missing.extend(w for w in gap if w not in missing)
            continue
        try:
            comm = commutator_value(t, g, h)
        except PoleError as exc:
            poles.append(str(exc))
            continue
        if not (comm - 2).is_zero():
            return ExtensionVerdict(EXTENDS, witness=(g, h), symbol=_symbol(t, g, h, comm), pairs=pairs)
    if missing:
        return ExtensionVerdict(UNDETERMINED, pairs=pairs, missing=tuple(missing),
                                reason="missing entries: " + ", ".join(str(w) for w in missing))
    if poles:
        return ExtensionVerdict(UNDETERMINED, pairs=pairs, reason="; ".join(poles))
    return ExtensionVerdict(DOES_NOT_EXTEND, pairs=pairs,
                            reason="tr[g, h] = 2 for every supplied generating pair")


# -- splitting ---------------------------------------------------------

def _square_class(c: Fraction) -> int:
    """Squarefree integer in the square class of a nonzero rational."""
    n = c.numerator * c.denominator
    sign = -1 if n < 0 else 1
    out = 1
    for p, e in sympy.factorint(abs(n)).items():
        if e % 2:
            out *= p
    return sign * out


def _split_off(n: int, p: int) -> tuple[int, int]:
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k, n


def hilbert_symbol(a: Fraction | int, b: Fraction | int, p: int | None) -> int:
    """Local Hilbert symbol of nonzero rationals at prime ``p`` (``None`` is the real place)."""
    a, b = Fraction(a), Fraction(b)
    if a == 0 or b == 0:
        raise ValueError("Hilbert symbol needs nonzero entries")
    if p is None:
        return -1 if a < 0 and b < 0 else 1
    x, y = _square_class(a), _square_class(b)
    alpha, u = _split_off(x, p)
    beta, v = _split_off(y, p)
    if p == 2:
        eps = lambda n: ((n - 1) // 2) % 2  # noqa: E731
        omega = lambda n: ((n * n - 1) // 8) % 2  # noqa: E731
        e = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u)
        return -1 if e % 2 else 1
    s = (-1) ** (alpha * beta * ((p - 1) // 2))
    if beta % 2:
        s *= sympy.legendre_symbol(u % p, p)
    if alpha % 2:
        s *= sympy.legendre_symbol(v % p, p)
    return s


def _rational_split(a: Fraction, b: Fraction) -> tuple[bool, Any]:
    places: list[int | None] = [None]
    for c in (a, b):
        for n in (c.numerator, c.denominator):
            places.extend(p for p in sympy.factorint(abs(n)) if p not in places)
    if 2 not in places:
        places.append(2)
    for p in places:
        if hilbert_symbol(a, b, p) == -1:
            return False, "real" if p is None else p
    return True, None


def _has_negative_real_conjugate(x: AlgNum) -> bool:
    t = sympy.Symbol("t")
    poly = sympy.Poly(list(reversed([sympy.Rational(c.numerator, c.denominator) for c in x.minpoly])), t)
    return any(r.is_negative for r in poly.real_roots())


def symbol_is_split(s: QuaternionSymbol) -> str:
    """``split``, ``nonsplit`` (with a local certificate), or ``unknown``."""
    a, b = s.a, s.b
    if a.square_root_in_own_field() or b.square_root_in_own_field():
        return SPLIT
    if (a + b).is_zero() or (a + b - 1).is_zero():
        return SPLIT
    if a.is_rational() and b.is_rational():
        ok, _ = _rational_split(a.to_fraction(), b.to_fraction())
        return SPLIT if ok else NONSPLIT
    for r, other in ((a, b), (b, a)):
        if r.is_rational() and r.to_fraction() < 0 and _has_negative_real_conjugate(other):
            # the real place where ``other`` is negative ramifies
            return NONSPLIT
    return UNKNOWN
