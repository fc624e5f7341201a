from __future__ import annotations

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import sl2z
from tautext.algebra import AlgNum
from tautext.azumaya import (
    DOES_NOT_EXTEND, EXTENDS, NONSPLIT, SPLIT, UNDETERMINED, UNKNOWN, QuaternionSymbol,
    extension_verdict, hilbert_symbol, symbol_is_split,
)
from tautext.jsj import trefoil_piece
from tautext.limiting import CharacterTable, is_reducible
from tautext.matrix import Mat2

TREFOIL = {"u": 1, "v": 0, "Uv": 2, "uuu": -2, "uv": -2}


def sqrt2() -> AlgNum:
    return next(r for r, _ in AlgNum.roots_of([-2, 0, 1]) if r.approx().real > 0)


def test_trefoil_piece_extends_with_symbol():
    v = extension_verdict(CharacterTable("trefoil", TREFOIL), [("u", "v")])
    assert v.status == EXTENDS
    assert [str(w) for w in v.witness] == ["u", "v"]
    assert v.symbol.as_tuple() == (AlgNum.rational(-3), AlgNum.rational(1))
    assert symbol_is_split(v.symbol) == SPLIT


def test_abelian_table_does_not_extend():
    t = CharacterTable("p", {"a": 3, "b": 3, "ab": 7})
    v = extension_verdict(t, [("a", "b")])
    assert v.status == DOES_NOT_EXTEND and v.pairs


def test_missing_product_is_undetermined():
    t = CharacterTable("p", {"a": 1, "b": 0})
    v = extension_verdict(t, [("a", "b")])
    assert v.status == UNDETERMINED
    assert [str(w) for w in v.missing] == ["ab"]
    assert "ab" in v.reason


def test_empty_pair_list_rejected():
    with pytest.raises(ValueError):
        extension_verdict(CharacterTable("p", TREFOIL), [])


def test_symbol_fallback_when_first_trace_is_parabolic():
    # chi(g) = 2 makes chi(g)^2 - 4 vanish; the symbol uses h instead
    t = CharacterTable("p", {"a": 2, "b": 3, "ab": -1})
    v = extension_verdict(t, [("a", "b")])
    assert v.status == EXTENDS
    assert v.symbol.a == AlgNum.rational(5)


def test_symbol_entries_nonzero():
    with pytest.raises(ValueError):
        QuaternionSymbol(0, 1)


# -- splitting ------------------------------------------------------------------------

def test_split_examples():
    assert symbol_is_split(QuaternionSymbol(-3, 1)) == SPLIT
    assert symbol_is_split(QuaternionSymbol(-1, -1)) == NONSPLIT
    assert symbol_is_split(QuaternionSymbol(2, 3)) == NONSPLIT
    r = sqrt2()
    assert symbol_is_split(QuaternionSymbol(r + 3, r + 5)) == UNKNOWN
    # -sqrt2 is a real conjugate of sqrt2 and -1 < 0: ramified at that real place
    assert symbol_is_split(QuaternionSymbol(-1, r)) == NONSPLIT


def _has_rational_point(a: int, b: int, bound: int = 12) -> bool:
    """Search for a nontrivial integer solution of a x^2 + b y^2 = z^2."""
    for x, y in itertools.product(range(bound + 1), repeat=2):
        if x == y == 0:
            continue
        n = a * x * x + b * y * y
        if n >= 0 and round(n ** 0.5) ** 2 == n:
            return True
    return False


nonzero = st.integers(-30, 30).filter(lambda n: n != 0)


@settings(max_examples=150)
@given(nonzero, nonzero)
def test_hilbert_product_formula(a, b):
    from sympy import primefactors
    places = [None, 2] + [p for p in set(primefactors(abs(a)) + primefactors(abs(b))) if p != 2]
    prod = 1
    for p in places:
        prod *= hilbert_symbol(a, b, p)
    assert prod == 1


@settings(max_examples=150)
@given(nonzero, nonzero)
def test_rational_splitting_matches_point_search(a, b):
    verdict = symbol_is_split(QuaternionSymbol(a, b))
    if _has_rational_point(a, b):
        assert verdict == SPLIT
    if verdict == NONSPLIT:
        assert not _has_rational_point(a, b, bound=20)


# -- agreement with reducibility -------------------------------------------------------

@settings(max_examples=80)
@given(sl2z, sl2z)
def test_verdict_agrees_with_reducibility(a, b):
    t = CharacterTable.from_matrices("p", {"a": a, "b": b}, ["a", "b", "ab"])
    v = extension_verdict(t, [("a", "b")])
    assert (v.status == EXTENDS) == (not is_reducible(t, [("a", "b")]))
    assert v.status != UNDETERMINED


def test_verdict_depends_only_on_trace_values():
    p = trefoil_piece()
    direct = CharacterTable.from_matrices("trefoil", p.images, TREFOIL)
    g = Mat2(2, 1, 1, 1)
    conj = {k: g * m * g.adjugate() for k, m in p.images.items()}
    conjugated = CharacterTable.from_matrices("trefoil", conj, TREFOIL)
    literal = CharacterTable("trefoil", TREFOIL)
    vs = [extension_verdict(t, [("u", "v")]).to_json() for t in (direct, conjugated, literal)]
    assert vs[0] == vs[1] == vs[2]


def test_real_place_symbol():
    assert hilbert_symbol(-1, -1, None) == -1
    assert hilbert_symbol(Fraction(-1, 3), 5, None) == 1
