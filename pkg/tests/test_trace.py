from __future__ import annotations

import random

import pytest
from hypothesis import given, settings

from conftest import fricke, random_sl2z, random_word, sl2z, words
from tautext.algebra import CycNum, Poly
from tautext.errors import BudgetExceededError
from tautext.matrix import evaluate_word
from tautext.trace import (
    X, Y, Z, chebyshev_power_trace, commutator_trace_identity, gluing_factorization,
    orbifold_character_components, trace_poly, trace_poly_linear,
)
from tautext.words import Word


def test_word_parsing_forms_agree():
    assert Word.parse("aba⁻¹b⁻¹") == Word.parse("abAB") == Word.parse("a b a^-1 b^{-1}")
    assert Word.parse("aA") == Word("")
    assert Word.parse("s²") == Word("ss")


def test_trace_poly_examples():
    assert trace_poly("a") == X
    assert trace_poly("") == Poly.const(2)
    assert trace_poly("abAB") == X ** 2 + Y ** 2 + Z ** 2 - X * Y * Z - 2
    assert trace_poly("aab") == X * Z - Y


def test_aab_matches_matrix_traces():
    rng = random.Random(3)
    p = trace_poly("aab")
    for _ in range(100):
        a, b = random_sl2z(rng), random_sl2z(rng)
        assert p.evaluate(fricke(a, b)) == evaluate_word("aab", {"a": a, "b": b}).trace()


def test_commutator_identity_helper():
    lhs, rhs = commutator_trace_identity()
    assert lhs == rhs


def test_gluing_factorization_identity():
    lhs, rhs = gluing_factorization()
    assert lhs == rhs
    assert set(lhs.variables) == {"x", "y", "z", "zp"}


@settings(max_examples=150)
@given(words, sl2z, sl2z)
def test_trace_poly_matches_matrix_trace(w, a, b):
    assert trace_poly(w).evaluate(fricke(a, b)) == evaluate_word(w, {"a": a, "b": b}).trace()


@settings(max_examples=150)
@given(words)
def test_linear_route_equals_recursion(w):
    assert trace_poly_linear(w) == trace_poly(w)


@settings(max_examples=100)
@given(words, words)
def test_trace_poly_inversion_and_cyclic_invariance(u, v):
    assert trace_poly(u) == trace_poly(u.inverse())
    assert trace_poly(u * v) == trace_poly(v * u)


def test_chebyshev_power_trace_examples():
    z = Poly.var("z")
    assert chebyshev_power_trace(1) == z
    assert chebyshev_power_trace(2) == z ** 2 - 2
    assert chebyshev_power_trace(5) == z ** 5 - 5 * z ** 3 + 5 * z
    with pytest.raises(ValueError):
        chebyshev_power_trace(0)


def test_chebyshev_agrees_with_word_power_and_matrix_powers():
    rng = random.Random(9)
    for q in range(1, 9):
        p = chebyshev_power_trace(q)
        assert p == trace_poly(Word("ab") ** q)
        for _ in range(10):
            c = random_sl2z(rng) * random_sl2z(rng)
            assert p.evaluate({"z": c.trace()}) == (c ** q).trace()


def test_orbifold_components_examples():
    assert orbifold_character_components(2) == {CycNum.rational(2), CycNum.rational(-2)}
    assert orbifold_character_components(3) == {CycNum.rational(2), CycNum.rational(-1)}
    assert orbifold_character_components(4) == {CycNum.rational(2), CycNum.rational(0), CycNum.rational(-2)}
    for q in range(2, 9):
        assert len(orbifold_character_components(q)) == q // 2 + 1
    with pytest.raises(ValueError):
        orbifold_character_components(1)


def test_trace_budget_is_enforced():
    with pytest.raises(BudgetExceededError) as exc:
        trace_poly_linear("abAbaBabABBaab", budget=3)
    assert exc.value.code == "budget-exceeded"


def test_trace_oracle_bulk_sample():
    rng = random.Random(21)
    pairs = [(random_sl2z(rng), random_sl2z(rng)) for _ in range(20)]
    for _ in range(100):
        w = random_word(rng)
        p = trace_poly(w)
        for a, b in pairs:
            assert p.evaluate(fricke(a, b)) == evaluate_word(w, {"a": a, "b": b}).trace()
