"""2x2 matrices over any commutative ring, and word evaluation."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Mapping

from .words import Word

__all__ = ["Mat2", "evaluate_word"]


@dataclass(frozen=True)
class Mat2:
    a: Any
    b: Any
    c: Any
    d: Any

    @classmethod
    def of(cls, rows: Any) -> Mat2:
        (a, b), (c, d) = rows
        return cls(a, b, c, d)

    @classmethod
    def identity(cls, one: Any = 1, zero: Any = 0) -> Mat2:
        return cls(one, zero, zero, one)

    def rows(self) -> tuple[tuple[Any, Any], tuple[Any, Any]]:
        return (self.a, self.b), (self.c, self.d)

    def map(self, f: Callable[[Any], Any]) -> Mat2:
        return Mat2(f(self.a), f(self.b), f(self.c), f(self.d))

    def __mul__(self, o: Mat2) -> Mat2:
        if not isinstance(o, Mat2):
            return Mat2(self.a * o, self.b * o, self.c * o, self.d * o)
        return Mat2(self.a * o.a + self.b * o.c, self.a * o.b + self.b * o.d,
                    self.c * o.a + self.d * o.c, self.c * o.b + self.d * o.d)

    def __rmul__(self, s: Any) -> Mat2:
        return Mat2(s * self.a, s * self.b, s * self.c, s * self.d)

    def __add__(self, o: Mat2) -> Mat2:
        return Mat2(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)

    def __sub__(self, o: Mat2) -> Mat2:
        return Mat2(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)

    def __neg__(self) -> Mat2:
        return Mat2(-self.a, -self.b, -self.c, -self.d)

    def trace(self) -> Any:
        return self.a + self.d

    def det(self) -> Any:
        return self.a * self.d - self.b * self.c

    def adjugate(self) -> Mat2:
        """Inverse for determinant-one matrices."""
        return Mat2(self.d, -self.b, -self.c, self.a)

    def __pow__(self, k: int) -> Mat2:
        base = self if k >= 0 else self.adjugate()
        one = self.a * 0 + 1
        result = Mat2.identity(one, one * 0)
        k = abs(k)
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def entries(self) -> tuple[Any, Any, Any, Any]:
        return self.a, self.b, self.c, self.d


def evaluate_word(word: Word | str, images: Mapping[str, Mat2],
                  normalize: Callable[[Mat2], Mat2] | None = None) -> Mat2:
    """Image of ``word`` under generators -> matrices (all of determinant one)."""
    word = Word.parse(word) if isinstance(word, str) else word
    inverses: dict[str, Mat2] = {}
    some = next(iter(images.values()))
    one = some.a * 0 + 1
    result = Mat2.identity(one, one * 0)
    for ch in word.letters:
        g = ch.lower()
        if g not in images:
            raise KeyError(f"no image for generator {g!r}")
        if ch.islower():
            m = images[g]
        else:
            if g not in inverses:
                inverses[g] = images[g].adjugate()
            m = inverses[g]
        result = result * m
        if normalize is not None:
            result = normalize(result)
    return result
