"""Freely reduced words in single-letter generators.

A lowercase letter is a generator and the matching uppercase letter its
inverse, so ``"abAB"`` is the commutator of ``a`` and ``b``.  The parser also
accepts exponents (``a^3``, ``u^{-1}``, ``a⁻¹``, ``s²``) and ``1`` for the
identity.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable

from .errors import ParseError

__all__ = ["Word"]

_SUPERSCRIPTS = str.maketrans("⁰¹²³⁴⁵⁶⁷⁸⁹⁻", "0123456789-")
_TOKEN = re.compile(r"\s*([A-Za-z])\s*(?:\^\s*\{?\s*(-?\d+)\s*\}?|([⁻⁰¹²³⁴⁵⁶⁷⁸⁹]+))?")


def _invert(letter: str) -> str:
    return letter.swapcase()


def _reduce(letters: Iterable[str]) -> str:
    out: list[str] = []
    for ch in letters:
        if out and out[-1] == _invert(ch):
            out.pop()
        else:
            out.append(ch)
    return "".join(out)


@dataclass(frozen=True)
class Word:
    """A freely reduced word; equality is equality of reduced letter strings."""

    letters: str = ""

    def __post_init__(self) -> None:
        if not all(ch.isalpha() and ch.isascii() for ch in self.letters):
            raise ParseError(f"invalid letters in word {self.letters!r}")
        object.__setattr__(self, "letters", _reduce(self.letters))

    @classmethod
    def parse(cls, text: str | Word) -> Word:
        if isinstance(text, Word):
            return text
        s = text.strip()
        if s in ("", "1", "e", "id"):
            return cls("")
        pos, out = 0, []
        while pos < len(s):
            m = _TOKEN.match(s, pos)
            if not m or m.end() == pos:
                raise ParseError(f"cannot parse word {text!r} at position {pos}")
            letter, power, sup = m.groups()
            k = int(power) if power is not None else int(sup.translate(_SUPERSCRIPTS)) if sup else 1
            out.append((letter if k >= 0 else _invert(letter)) * abs(k))
            pos = m.end()
            while pos < len(s) and s[pos].isspace():
                pos += 1
        return cls("".join(out))

    @classmethod
    def power_of(cls, letter: str, k: int) -> Word:
        return cls((letter if k >= 0 else _invert(letter)) * abs(k))

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __mul__(self, other: Word | str) -> Word:
        other = Word.parse(other) if isinstance(other, str) else other
        return Word(self.letters + other.letters)

    def __pow__(self, k: int) -> Word:
        base = self if k >= 0 else self.inverse()
        return Word(base.letters * abs(k))

    def inverse(self) -> Word:
        return Word("".join(_invert(ch) for ch in reversed(self.letters)))

    def reversed(self) -> Word:
        """The letters read backwards (not the inverse)."""
        return Word(self.letters[::-1])

    def is_identity(self) -> bool:
        return not self.letters

    def generators(self) -> frozenset[str]:
        return frozenset(ch.lower() for ch in self.letters)

    def exponent_sum(self, gen: str) -> int:
        return self.letters.count(gen.lower()) - self.letters.count(gen.upper())

    def cyclically_reduced(self) -> Word:
        s = self.letters
        while len(s) >= 2 and s[0] == _invert(s[-1]):
            s = s[1:-1]
        return Word(s)

    def canonical_cyclic(self) -> str:
        """Smallest rotation of the word or its inverse: a key for trace memoization."""
        w = self.cyclically_reduced().letters
        if not w:
            return ""
        inv = Word(w).inverse().letters
        return min(min(x[i:] + x[:i] for i in range(len(x))) for x in (w, inv))

    def substitute(self, images: dict[str, Word]) -> Word:
        """Apply a homomorphism given on generators."""
        out = []
        for ch in self.letters:
            img = images.get(ch.lower())
            if img is None:
                out.append(ch)
            else:
                out.append(img.letters if ch.islower() else img.inverse().letters)
        return Word("".join(out))

    def __str__(self) -> str:
        return self.letters or "1"

    def __repr__(self) -> str:
        return f"Word({self.letters!r})"
