from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given, settings

from conftest import random_sl2z, sl2z
from tautext.algebra import AlgNum
from tautext.errors import MissingEntriesError, PoleError, ValidationError
from tautext.ideal_points import Pole, ideal_branches
from tautext.jsj import klein_bundle_piece, trefoil_piece
from tautext.limiting import (
    CharacterTable, PieceGluing, assemble, commutator_value, is_reducible, tillmann_checklist,
)
from tautext.matrix import Mat2
from tautext.twobridge import TwoBridgeKnot, character_curve, slope_word
from tautext.words import Word

TREFOIL = {"u": 1, "v": 0, "Uv": 2, "uuu": -2}
KLEIN = {"st": 2, "ss": -2}
# products needed by the checks, with traces read off the piece matrices: uv = [[-1,-1],[0,-1]],
# Uv uuu = -Uv and st ss = -st
TREFOIL_EXTRA = {"uv": -2, "Uvuuu": -2}
KLEIN_EXTRA = {"stss": -2}


def trefoil_table() -> CharacterTable:
    return CharacterTable("trefoil", {**TREFOIL, **TREFOIL_EXTRA})


def klein_table() -> CharacterTable:
    return CharacterTable("klein", {**KLEIN, **KLEIN_EXTRA})


def fig8_gluing() -> PieceGluing:
    return PieceGluing("trefoil", ("Uv", "uuu"), "klein", ("st", "ss"))


def fig8_branches():
    knot = TwoBridgeKnot.parse("figure-eight")
    return knot, ideal_branches(character_curve(knot))


# -- tables ---------------------------------------------------------------------

def test_empty_word_maps_to_two():
    _, bs = fig8_branches()
    t = assemble(bs[0], ["1"])
    assert t["1"] == AlgNum.rational(2)
    assert CharacterTable("p", {})[""] == AlgNum.rational(2)
    with pytest.raises(ValidationError):
        CharacterTable("p", {"": 3})


def test_piece_tables_agree_with_matrices():
    values = {**TREFOIL, **TREFOIL_EXTRA}
    t = CharacterTable.from_matrices("trefoil", trefoil_piece().images, values)
    for w, v in values.items():
        assert t[w] == AlgNum.rational(v)
    values = {**KLEIN, **KLEIN_EXTRA}
    k = CharacterTable.from_matrices("klein", klein_bundle_piece().images, values)
    for w, v in values.items():
        assert k[w] == AlgNum.rational(v)


def test_lookup_is_up_to_trace_equivalence():
    t = trefoil_table()
    assert t["vU"] == t["Uv"] == t["Vu"]
    with pytest.raises(ValidationError):
        CharacterTable("p", {"ab": 1, "ba": 2})


def test_inversion_symmetry_is_enforced():
    with pytest.raises(ValidationError):
        CharacterTable("p", {"abb": 1, "BBA": 3})


def test_missing_entry_error():
    with pytest.raises(MissingEntriesError):
        trefoil_table()["uuuv"]


def test_json_round_trip():
    t = CharacterTable("x", {"a": 3, "b": Pole(2), "ab": AlgNum.roots_of([-2, 0, 1])[0][0]})
    back = CharacterTable.from_json(t.to_json())
    assert back.to_json() == t.to_json()
    assert back["b"] == Pole(2)


# -- assemble ------------------------------------------------------------------------

def test_assemble_fails_loudly_on_pole():
    _, bs = fig8_branches()
    with pytest.raises(PoleError, match="word a not in a bounded subgroup"):
        assemble(bs[0], ["a"])
    t = assemble(bs[0], ["a", "1"], allow_poles=True)
    assert isinstance(t["a"], Pole) and "has-poles" in t.flags


def test_trace_identity_survives_limits():
    knot, bs = fig8_branches()
    rng = random.Random(8)
    short = {Word("".join(t)) for n in range(1, 5) for t in itertools.product("aAbB", repeat=n)}
    checked = 0
    for b in bs:
        candidates = [slope_word(knot, s) for s in (4, -4)]
        candidates += sorted((w for w in short if not isinstance(assemble(b, [w], allow_poles=True)[w], Pole)),
                             key=str)
        for _ in range(60):
            g, h = rng.choice(candidates), rng.choice(candidates)
            words = [g, h, g * h, g * h.inverse()]
            t = assemble(b, words, allow_poles=True)
            vals = [t[w] for w in words]
            if any(isinstance(v, Pole) for v in vals):
                continue
            checked += 1
            assert vals[2] + vals[3] == vals[0] * vals[1]
    assert checked > 10


@settings(max_examples=80)
@given(sl2z, sl2z)
def test_trace_identity_on_matrix_tables(a, b):
    words = ["a", "b", "ab", "aB"]
    t = CharacterTable.from_matrices("p", {"a": a, "b": b}, words)
    assert t["ab"] + t["aB"] == t["a"] * t["b"]


# -- reducibility ---------------------------------------------------------------------

def test_reducibility_examples():
    abelian = CharacterTable("p", {"a": 2, "b": 2, "ab": 2})
    assert is_reducible(abelian, [("a", "b")])
    t = trefoil_table()
    assert commutator_value(t, "u", "v") == AlgNum.rational(3)
    assert not is_reducible(t, [("u", "v")])
    assert is_reducible(klein_table(), [("st", "ss")])


def test_reducibility_needs_pairs_and_entries():
    with pytest.raises(ValueError):
        is_reducible(trefoil_table(), [])
    with pytest.raises(MissingEntriesError, match="uuuv"):
        is_reducible(trefoil_table(), [("uuu", "v")])


def _full_table(a: Mat2, b: Mat2, g: Word, h: Word) -> CharacterTable:
    words = {g, h, g * h, h * g, g.inverse(), h.inverse(), g.inverse() * h, h * g.inverse(),
             g * h.inverse(), h.inverse() * g, g.inverse() * h.inverse(), h.inverse() * g.inverse()}
    return CharacterTable.from_matrices("p", {"a": a, "b": b}, words)


@settings(max_examples=60)
@given(sl2z, sl2z)
def test_reducibility_invariant_under_swap_and_inversion(a, b):
    g, h = Word("a"), Word("bA")
    t = _full_table(a, b, g, h)
    base = is_reducible(t, [(g, h)])
    assert is_reducible(t, [(h, g)]) == base
    assert is_reducible(t, [(g.inverse(), h)]) == base
    assert is_reducible(t, [(g, h.inverse())]) == base


def test_power_tables_are_reducible():
    rng = random.Random(12)
    for _ in range(20):
        m = random_sl2z(rng)
        words = [Word("g") ** k for k in range(-4, 5)]
        t = CharacterTable.from_matrices("p", {"g": m}, words)
        pairs = [(Word("g") ** i, Word("g") ** j) for i in range(1, 3) for j in range(-2, 3) if i + j <= 4]
        assert is_reducible(t, pairs)


# -- gluings and checklist -----------------------------------------------------------

def test_gluing_correspondence_must_be_bijection():
    with pytest.raises(ValidationError):
        PieceGluing("a", ("x", "y"), "b", ("s", "t"), (0, 0))
    gl = PieceGluing("a", ("x", "y"), "b", ("s", "t"), (1, 0))
    assert gl.matched() == [(Word("x"), Word("t")), (Word("y"), Word("s")), (Word("xy"), Word("ts"))]


def test_figure_eight_checklist_passes():
    r = tillmann_checklist([trefoil_table(), klein_table()], [fig8_gluing()])
    assert [r[k].status for k in (1, 3, 4)] == ["pass", "pass", "pass"]
    assert r[2].status == r[5].status == "not determined"
    assert r[2].reason and r[5].reason


def test_checklist_condition_one_names_pole_word():
    bad = CharacterTable("trefoil", {**TREFOIL, **TREFOIL_EXTRA, "uuuv": Pole(1)})
    r = tillmann_checklist([bad, klein_table()], [fig8_gluing()])
    assert r[1].status == "fail"
    assert r[1].witness == {"piece": "trefoil", "word": "uuuv"}


def test_checklist_condition_three_reports_mismatch():
    wrong = CharacterTable("klein", {"st": -2, "ss": -2, "stss": 2})
    r = tillmann_checklist([trefoil_table(), wrong], [fig8_gluing()])
    assert r[3].status == "fail"
    assert r[3].witness["a"]["value"] == "2" and r[3].witness["b"]["value"] == "-2"


def test_checklist_condition_four_detects_irreducible_boundary():
    t = trefoil_table()
    glued = PieceGluing("trefoil", ("u", "v"), "klein", ("st", "ss"))
    k = CharacterTable("klein", {"st": 1, "ss": 0, "stss": 1})
    r = tillmann_checklist([t, k], [glued])
    assert r[4].status == "fail"


def test_checklist_rejects_inconsistent_references():
    with pytest.raises(ValidationError):
        tillmann_checklist([trefoil_table()], [fig8_gluing()])
    with pytest.raises(ValidationError):
        tillmann_checklist([trefoil_table(), trefoil_table()], [])
    with pytest.raises(MissingEntriesError):
        tillmann_checklist([CharacterTable("trefoil", TREFOIL), klein_table()], [fig8_gluing()])
