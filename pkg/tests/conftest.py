"""Shared helpers: random SL2(Z) pairs, random words, small polynomial oracles."""
from __future__ import annotations

import random
from fractions import Fraction

from hypothesis import settings
from hypothesis import strategies as st

from tautext.matrix import Mat2
from tautext.words import Word

LETTERS = "aAbB"

# exact polynomial arithmetic has heavy-tailed timings; correctness is what is checked
settings.register_profile("exact", deadline=None)
settings.load_profile("exact")


def random_sl2z(rng: random.Random, steps: int = 4, bound: int = 3) -> Mat2:
    """Product of elementary matrices, so the determinant is exactly one."""
    m = Mat2.identity()
    for _ in range(steps):
        k = rng.randint(-bound, bound)
        e = Mat2(1, k, 0, 1) if rng.random() < 0.5 else Mat2(1, 0, k, 1)
        m = m * e
    return m


def random_word(rng: random.Random, max_len: int = 12, letters: str = LETTERS) -> Word:
    return Word("".join(rng.choice(letters) for _ in range(rng.randint(0, max_len))))


def fricke(a: Mat2, b: Mat2) -> dict[str, int]:
    return {"x": a.trace(), "y": b.trace(), "z": (a * b).trace()}


words = st.text(alphabet=LETTERS, max_size=12).map(Word)

sl2z = st.lists(
    st.tuples(st.booleans(), st.integers(-3, 3)), min_size=1, max_size=5,
).map(lambda steps: _product(steps))


def _product(steps: list[tuple[bool, int]]) -> Mat2:
    m = Mat2.identity()
    for upper, k in steps:
        m = m * (Mat2(1, k, 0, 1) if upper else Mat2(1, 0, k, 1))
    return m


# -- dense univariate oracles over Q (coefficient lists, low degree first) ----------

def _trim(a: list[Fraction]) -> list[Fraction]:
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _rem(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a = _trim(a)
    b = _trim(b)
    while len(a) >= len(b):
        c = a[-1] / b[-1]
        shift = len(a) - len(b)
        for i, bi in enumerate(b):
            a[shift + i] -= c * bi
        a = _trim(a)
        if not a:
            break
    return a


def euclid_resultant(f: list[Fraction], g: list[Fraction]) -> Fraction:
    """Resultant by the Euclidean remainder sequence, written independently of the package."""
    f, g = _trim([Fraction(c) for c in f]), _trim([Fraction(c) for c in g])
    if not f or not g:
        return Fraction(0)
    m, n = len(f) - 1, len(g) - 1
    if n == 0:
        return g[0] ** m
    if m == 0:
        return f[0] ** n
    r = _rem(f, g)
    if not r:
        return Fraction(0)
    k = len(r) - 1
    sign = -1 if (m * n) % 2 else 1
    return sign * g[-1] ** (m - k) * euclid_resultant(g, r)


# -- acceptance summary ----------------------------------------------------------------

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter) -> None:
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
