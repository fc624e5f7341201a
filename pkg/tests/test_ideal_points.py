from __future__ import annotations

import math
import random
from fractions import Fraction

import pytest

from tautext.algebra import AlgNum, Poly, newton_polygon
from tautext.errors import IndeterminateError, PointPolygonError, PoleError, SeparationError
from tautext.ideal_points import (
    Pole, boundary_slopes, eigenvalues_from_trace, ideal_branches, limiting_eigenvalue,
    limiting_value, norm_curve_test, points_at_infinity, puiseux_branches, valuation,
)
from tautext.trace import trace_poly
from tautext.twobridge import CharCurve, TwoBridgeKnot, a_polynomial, character_curve, slope_word

X, Z = Poly.var("x"), Poly.var("z")
M, L = Poly.var("M"), Poly.var("L")
I = AlgNum.roots_of([1, 0, 1])


def curve(p: Poly) -> CharCurve:
    return CharCurve.of(p, ("x", "z"))


def fig8():
    knot = TwoBridgeKnot.parse("figure-eight")
    return knot, character_curve(knot)


# -- points at infinity -------------------------------------------------------------

def test_hyperbola_points_at_infinity():
    pts = points_at_infinity(curve(Z * X - 1))
    assert {p.coords for p in pts} == {
        (AlgNum.rational(1), AlgNum.rational(0), AlgNum.rational(0)),
        (AlgNum.rational(0), AlgNum.rational(1), AlgNum.rational(0)),
    }


def test_circle_points_at_infinity_have_ratio_plus_minus_i():
    pts = points_at_infinity(curve(X ** 2 + Z ** 2 - 1))
    ratios = {p.coords[1] for p in pts}
    assert ratios == {r for r, _ in I}
    assert all(p.coords[0] == AlgNum.rational(1) for p in pts)


@pytest.mark.parametrize("spec", ["figure-eight", "5_2", "trefoil", "J(2,4)"])
def test_points_at_infinity_count_matches_degree(spec):
    c = character_curve(TwoBridgeKnot.parse(spec))
    pts = points_at_infinity(c)
    assert sum(p.multiplicity for p in pts) == c.defining.degree()


def test_figure_eight_branch_clusters_match_points():
    _, c = fig8()
    pts = points_at_infinity(c)
    branches = ideal_branches(c)
    assert {b.point for b in branches} == {p.coords for p in pts}
    assert len(branches) == 2


# -- branches ----------------------------------------------------------------------

def test_cusp_branch_ramification():
    c = curve(Z ** 2 - X ** 3)
    (pt,) = points_at_infinity(c)
    (b,) = puiseux_branches(c, pt)
    assert b.ramification == 2
    assert b.valuations() == {"x": -2, "z": -3}


def test_hyperbola_branches_and_limits():
    c = curve(Z * X - 1)
    bs = ideal_branches(c)
    b = next(b for b in bs if b.valuations() == {"x": -1, "z": 1})
    assert limiting_value(b, X) == Pole(1)
    assert limiting_value(b, Z) == AlgNum.rational(0)
    assert limiting_value(b, 7) == AlgNum.rational(7)
    assert limiting_value(b, Poly.const(7)) == AlgNum.rational(7)


def _pole_order_at_infinity(b) -> int:
    v = b.valuations()
    return -min(v["x"], v["z"])


@pytest.mark.parametrize("poly", [Z * X - 1, Z ** 2 - X ** 3, X ** 2 + Z ** 2 - 1,
                                  X ** 6 * (Z - 1) ** 2 - 1])
def test_branch_intersection_with_line_at_infinity_sums_to_degree(poly):
    c = curve(poly)
    assert sum(_pole_order_at_infinity(b) for b in ideal_branches(c)) == c.defining.degree()


@pytest.mark.parametrize("spec", ["figure-eight", "5_2", "trefoil", "J(2,4)"])
def test_knot_curve_branches_sum_to_degree(spec):
    c = character_curve(TwoBridgeKnot.parse(spec))
    assert sum(_pole_order_at_infinity(b) for b in ideal_branches(c)) == c.defining.degree()


def test_order_too_small_to_separate_branches():
    c = curve(X ** 6 * (Z - 1) ** 2 - 1)
    with pytest.raises(SeparationError) as exc:
        ideal_branches(c, order=3)
    assert exc.value.code == "order-too-small"
    assert len(ideal_branches(c, order=4)) == 4


def test_indeterminate_is_an_error_not_a_constant():
    _, c = fig8()
    b = ideal_branches(c)[0]
    # the defining polynomial vanishes on the branch; a large pole factor hides it past any order
    with pytest.raises(IndeterminateError):
        limiting_value(b, c.defining * X ** 100, max_order=16)


@pytest.mark.parametrize("spec", ["figure-eight", "5_2"])
def test_residual_vanishes_and_refines_consistently(spec):
    c = character_curve(TwoBridgeKnot.parse(spec))
    for b in ideal_branches(c):
        r = c.defining.evaluate(b.expansions)
        assert r.valuation() is None and r.prec is not None
        fine = b.refined(2 * b.order)
        r2 = c.defining.evaluate(fine.expansions)
        assert r2.valuation() is None and r2.prec == r.prec + b.order
        z, z2 = b.expansions["z"], fine.expansions["z"]
        assert z2.truncate(b.order).terms() == z.terms()


# -- valuations ----------------------------------------------------------------------

def _random_poly(rng: random.Random) -> Poly:
    p = Poly.const(rng.randint(1, 3))
    for _ in range(rng.randint(1, 3)):
        p = p + Poly.monomial({"x": rng.randint(0, 2), "z": rng.randint(0, 2)}, rng.randint(-3, 3))
    return p


def test_valuation_axioms_on_figure_eight_branches():
    _, c = fig8()
    rng = random.Random(4)
    for b in ideal_branches(c):
        assert valuation(b, Poly.const(5)) == 0
        for _ in range(25):
            f, g = _random_poly(rng), _random_poly(rng)
            if f.is_zero() or g.is_zero():
                continue
            vf, vg = valuation(b, f), valuation(b, g)
            assert valuation(b, f * g) == vf + vg
            if not (f + g).is_zero():
                assert valuation(b, f + g) >= min(vf, vg)
            assert valuation(b, (f, g)) == vf - vg


# -- slopes ---------------------------------------------------------------------------

def test_boundary_slopes_examples():
    knot, _ = fig8()
    assert boundary_slopes(a_polynomial(knot)) == {Fraction(4), Fraction(-4)}
    assert 0 in boundary_slopes(a_polynomial(TwoBridgeKnot.parse("J(2,4)")))
    with pytest.raises(PointPolygonError):
        boundary_slopes(M ** 2 * L)


def _invert_both(p: Poly) -> Poly:
    """M^a L^b p(1/M, 1/L), the symmetry of knot A-polynomials."""
    dm, dl = p.degree("M"), p.degree("L")
    out = Poly()
    for (m, l), c in zip(p.exponents(("M", "L")), (c for _, c in p.items())):
        out = out + Poly.monomial({"M": dm - m, "L": dl - l}, c)
    return out


def _invert_meridian(p: Poly) -> Poly:
    dm = p.degree("M")
    out = Poly()
    for (m, l), c in zip(p.exponents(("M", "L")), (c for _, c in p.items())):
        out = out + Poly.monomial({"M": dm - m, "L": l}, c)
    return out


@pytest.mark.parametrize("spec", ["figure-eight", "5_2", "J(2,4)", "trefoil"])
def test_slopes_invariant_under_symmetrization(spec):
    a = a_polynomial(TwoBridgeKnot.parse(spec))
    slopes = boundary_slopes(a)
    assert boundary_slopes(_invert_both(a)) == slopes
    # symmetrizing in M alone: A(M, L) A(1/M, L) has the slopes of A together with their negatives
    sym = a * _invert_meridian(a)
    assert boundary_slopes(sym) == slopes | {-s for s in slopes}
    assert boundary_slopes(sym * _invert_meridian(sym)) == boundary_slopes(sym)


# -- norm curves ----------------------------------------------------------------------

def test_norm_curve_examples():
    r = norm_curve_test(curve(X - 3), ["a"])
    assert not r
    assert str(r.witness) == "a"
    assert norm_curve_test(curve(Z * X - 1), [Z])
    knot, c = fig8()
    assert norm_curve_test(c, ["a", knot.longitude])
    with pytest.raises(ValueError):
        norm_curve_test(c, [])


# -- limiting values and eigenvalues -------------------------------------------------

def _edge_limit_oracle(apoly: Poly, slope: Fraction) -> set[AlgNum]:
    """Roots of the edge polynomial of the given slope, read as values of M^-p L^q."""
    poly = newton_polygon(apoly, ("M", "L"))
    values: set[AlgNum] = set()
    for (start, end), s in zip(poly.edges, poly.edge_slopes):
        if s != slope:
            continue
        terms = poly.edge_terms(apoly)[list(poly.edges).index((start, end))]
        # along the edge the exponents move by (-p k, q k); collect coefficients by k
        p, q = slope.numerator, slope.denominator
        base = min(terms.exponents(("M", "L")), key=lambda e: e[1])
        coeffs: dict[int, Fraction] = {}
        for (m, l), c in zip(terms.exponents(("M", "L")), (c for _, c in terms.items())):
            k = (l - base[1]) // q
            assert (m - base[0], l - base[1]) == (-p * k, q * k)
            coeffs[k] = c
        dense = [coeffs.get(k, Fraction(0)) for k in range(max(coeffs) + 1)]
        values |= {r for r, _ in AlgNum.roots_of(dense)}
    return values


def test_figure_eight_detected_branches_and_slope_traces():
    knot, c = fig8()
    apoly = a_polynomial(knot)
    detected = 0
    for b in ideal_branches(c):
        # the meridian trace blows up at every ideal point of this curve
        assert isinstance(limiting_value(b, "a"), Pole)
        for s in sorted(boundary_slopes(apoly)):
            w = slope_word(knot, s)
            v = limiting_value(b, w)
            if isinstance(v, Pole):
                continue
            detected += 1
            eig = limiting_eigenvalue(b, w)
            assert v in (AlgNum.rational(2), AlgNum.rational(-2))
            # the limiting eigenvalue is a root of the edge polynomial of that slope
            assert set(eig.eigenvalues) <= _edge_limit_oracle(apoly, s) | {e.inverse() for e in _edge_limit_oracle(apoly, s)}
            assert eig.root_of_unity_order in (1, 2)
    assert detected >= 2


def test_limiting_eigenvalue_pole_error():
    knot, c = fig8()
    b = ideal_branches(c)[0]
    with pytest.raises(PoleError, match="not the detected boundary class"):
        limiting_eigenvalue(b, "a")


def test_eigenvalues_from_trace_examples():
    r = eigenvalues_from_trace(-2)
    assert set(r.eigenvalues) == {AlgNum.rational(-1)} and r.root_of_unity_order == 2
    r = eigenvalues_from_trace(2)
    assert set(r.eigenvalues) == {AlgNum.rational(1)} and r.root_of_unity_order == 1
    r = eigenvalues_from_trace(1)
    assert r.root_of_unity_order == 6
    assert all(tuple(e.minpoly) == (1, -1, 1) for e in r.eigenvalues)


def test_limiting_value_of_trace_polynomial_matches_word():
    knot, c = fig8()
    for b in ideal_branches(c):
        for w in ("ab", "aB", "aabAB"):
            assert limiting_value(b, w) == limiting_value(b, trace_poly(w).subs({"y": X}))
        assert valuation(b, X) == -1
        assert math.isinf(valuation(b, Poly()))
