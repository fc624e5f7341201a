"""Ideal points of plane character curves via rational Newton-Puiseux expansions.

A curve ``f(v1, v2) = 0`` has three kinds of places over infinity:

* ``v1 -> oo``: expand ``v2`` in ``s = 1/v1``;
* ``v1 -> x0`` finite with ``v2 -> oo``: ``x0`` a root of the leading
  coefficient of ``f`` in ``v2``;
* vertical lines ``v1 = x0`` contained in the curve.

Every branch is parametrized by a local parameter ``t`` with ``s = Lam t^e``
and ``v2`` a Laurent series in ``t`` over an explicit number field.  Branches
are separated exactly by Duval's choice of parametrization, so distinct
conjugate branches carry distinct embeddings of their coefficient fields.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Any, Iterable, Sequence

import mpmath

from .algebra.algnum import AlgNum, is_root_of_unity
from .algebra.newton import newton_polygon
from .algebra.numberfield import QQ, FieldElem, NumberField, RootExtension
from .algebra.poly import Poly, resultant
from .errors import IndeterminateError, PoleError, SeparationError
from .series import LaurentSeries
from .trace import trace_poly_linear as trace_poly
from .twobridge import CharCurve
from .words import Word

__all__ = [
    "PointAtInfinity", "IdealBranch", "Pole", "Limit", "NormCurveResult", "EigenvalueResult",
    "points_at_infinity", "ideal_branches", "puiseux_branches", "valuation", "limiting_value",
    "boundary_slopes", "norm_curve_test", "limiting_eigenvalue", "eigenvalues_from_trace",
    "DEFAULT_ORDER", "MAX_ORDER",
]

DEFAULT_ORDER = 8
MAX_ORDER = 64

Biv = dict[tuple[int, int], FieldElem]  # (degree in s or t, degree in w) -> coefficient


# -- points at infinity ----------------------------------------------------------------

@dataclass(frozen=True)
class PointAtInfinity:
    """``[X : Z : 0]`` on the line at infinity, normalized to ``[1 : s : 0]`` or ``[0 : 1 : 0]``."""

    coords: tuple[AlgNum, AlgNum, AlgNum]
    multiplicity: int

    def to_json(self) -> dict[str, Any]:
        return {"coords": [c.to_json() for c in self.coords], "multiplicity": self.multiplicity}


def _one() -> AlgNum:
    return AlgNum.rational(1)


def _zero() -> AlgNum:
    return AlgNum.rational(0)


VERTICAL = (_zero(), _one(), _zero())


def points_at_infinity(curve: CharCurve) -> list[PointAtInfinity]:
    """Roots of the top-degree form of the defining polynomial, with multiplicities."""
    f = curve.defining
    if f.is_constant():
        return []
    v1, v2 = curve.chart
    d = f.degree()
    top = {e: c for e, c in zip(f.exponents((v1, v2)), (c for _, c in f.items())) if sum(e) == d}
    dense = [Fraction(0)] * (d + 1)
    for (a, b), c in top.items():
        dense[b] = c
    while dense and dense[-1] == 0:
        dense.pop()
    out = []
    if len(dense) > 1:
        for root, mult in AlgNum.roots_of(dense):
            out.append(PointAtInfinity((_one(), root, _zero()), mult))
    if len(dense) - 1 < d:
        out.append(PointAtInfinity(VERTICAL, d - (len(dense) - 1)))
    return out


# -- Newton-Puiseux ------------------------------------------------------------------------

@dataclass
class _State:
    field: NumberField
    G: Biv
    P: dict[int, FieldElem]  # exact part of v2 in t
    kappa: FieldElem  # v2 = P + kappa t^mu w
    mu: int
    lam: FieldElem  # s = lam t^e
    e: int
    x0: FieldElem  # finite centre of v1 (unused at v1 = oo)

    def lift(self, ext: RootExtension) -> _State:
        f = ext.lift
        return _State(ext.field, {k: f(c) for k, c in self.G.items()}, {k: f(c) for k, c in self.P.items()},
                      f(self.kappa), self.mu, f(self.lam), self.e, f(self.x0))


def _lower_hull(points: Iterable[tuple[int, int]]) -> list[tuple[int, int]]:
    pts = sorted(set(points))
    hull: list[tuple[int, int]] = []
    for p in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1) <= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


def _edges(G: Biv) -> list[tuple[Fraction, list[tuple[int, int]]]]:
    """Lower-hull edges in the (deg w, deg s) plane with their exponent ``gamma``."""
    best: dict[int, int] = {}
    for i, j in G:
        best[j] = min(best.get(j, i), i)
    hull = _lower_hull((j, i) for j, i in best.items())
    out = []
    for (j1, i1), (j2, i2) in zip(hull, hull[1:]):
        gamma = Fraction(i1 - i2, j2 - j1)
        on_edge = [(j, i) for j, i in sorted(best.items()) if j1 <= j <= j2
                   and Fraction(i) + gamma * j == Fraction(i1) + gamma * j1]
        out.append((gamma, on_edge))
    return out


def _binomial_row(n: int) -> list[int]:
    return [math.comb(n, k) for k in range(n + 1)]


def _descend(st: _State, gamma: Fraction, root: FieldElem) -> _State:
    """Substitute ``s = lam t^q``, ``w = t^m (c + w')`` for one edge root."""
    m, q = gamma.numerator, gamma.denominator
    v = 0 if q == 1 else next(v for v in range(q) if (m * v + 1) % q == 0)
    lam = root ** v
    c = root ** ((1 + m * v) // q)
    base = min(q * i + m * j for i, j in st.G)
    lam_pows: dict[int, FieldElem] = {}
    c_pows: dict[int, FieldElem] = {}

    def lp(k: int) -> FieldElem:
        if k not in lam_pows:
            lam_pows[k] = lam ** k
        return lam_pows[k]

    def cp(k: int) -> FieldElem:
        if k not in c_pows:
            c_pows[k] = c ** k
        return c_pows[k]

    G: Biv = {}
    for (i, j), a in st.G.items():
        coef = a * lp(i)
        texp = q * i + m * j - base
        for k, binom in enumerate(_binomial_row(j)):
            term = coef * cp(j - k) * binom
            key = (texp, k)
            G[key] = G[key] + term if key in G else term
    G = {k: c for k, c in G.items() if not c.is_zero()}
    P = {q * k: ck * lp(k) for k, ck in st.P.items()}
    kappa = st.kappa * lp(st.mu)
    mu = q * st.mu + m
    P[mu] = P[mu] + kappa * c if mu in P else kappa * c
    lam_total = st.lam * lp(st.e)
    return _State(st.field, G, P, kappa, mu, lam_total, st.e * q, st.x0)


def _expand(st: _State, first: bool, keep_gamma, allow_zero: bool) -> list[tuple[str, _State]]:
    """All branch states reachable from ``st``; each is ``exact`` or ``simple``."""
    out: list[tuple[str, _State]] = []
    G = st.G
    jmin = min(j for _, j in G)
    if jmin > 0:
        if allow_zero:
            out.append(("exact", _State(st.field, {}, dict(st.P), st.kappa, st.mu, st.lam, st.e, st.x0)))
        G = {(i, j - jmin): c for (i, j), c in G.items()}
        st = _State(st.field, G, st.P, st.kappa, st.mu, st.lam, st.e, st.x0)
    if not first:
        if (0, 0) in G:
            return out  # no further roots tend to zero
        if (0, 1) in G:
            out.append(("simple", st))
            return out
    for gamma, pts in _edges(G):
        if not keep_gamma(gamma):
            continue
        q = gamma.denominator
        j0 = pts[0][0]
        phi = [st.field.zero()] * ((pts[-1][0] - j0) // q + 1)
        for j, i in pts:
            phi[(j - j0) // q] = G[(i, j)]
        for ext in st.field.roots_of(phi):
            lifted = st.lift(ext) if ext.field is not st.field else st
            nxt = _descend(lifted, gamma, ext.root)
            out.extend(_expand(nxt, False, lambda g: g > 0, True))
    return out


def _series_inverse(a: LaurentSeries, prec: int) -> LaurentSeries:
    """Inverse of a power series with nonzero constant term, modulo ``t^prec``."""
    a0 = a.coefficient(0)
    if a.valuation() != 0:
        raise ZeroDivisionError("series is not a unit")
    inv0 = a0.inverse()
    b = [inv0]
    for k in range(1, prec):
        acc = a.field.zero()
        for i in range(1, k + 1):
            if a.prec is not None and i >= a.prec:
                break
            ai = a.coefficient(i)
            if not ai.is_zero():
                acc = acc + ai * b[k - i]
        b.append(-acc * inv0)
    return LaurentSeries(a.field, dict(enumerate(b)), prec)


def _eval_biv(G: Biv, w: LaurentSeries, prec: int, deriv: bool = False) -> LaurentSeries:
    """``G(t, w)`` (or ``dG/dw``) modulo ``t^prec``."""
    K = w.field
    by_j: dict[int, dict[int, FieldElem]] = {}
    for (i, j), c in G.items():
        if deriv:
            if j == 0:
                continue
            i, j, c = i, j - 1, c * j
        by_j.setdefault(j, {})[i] = c
    if not by_j:
        return LaurentSeries(K, {}, prec)
    acc = LaurentSeries(K, {}, None)
    for j in range(max(by_j), -1, -1):
        acc = (acc * w).truncate(prec) + LaurentSeries(K, by_j.get(j, {}), prec)
    return acc.truncate(prec)


def _solve_simple(G: Biv, N: int) -> LaurentSeries:
    """The unique power series ``w = O(t)`` with ``G(t, w) = 0`` modulo ``t^N``."""
    K = next(iter(G.values())).field
    w = LaurentSeries(K, {}, 1)
    p = 1
    while p < N:
        p = min(2 * p, N)
        w_p = LaurentSeries(K, w.terms(), p)
        g = _eval_biv(G, w_p, p)
        dg = _eval_biv(G, w_p, p, deriv=True)
        w = (w_p - g * _series_inverse(dg, p)).truncate(p)
    return LaurentSeries(K, w.terms(), N)


# -- branches -----------------------------------------------------------------------------

@dataclass(frozen=True)
class Pole:
    """A function with a pole of the given (positive) order in the local parameter."""

    order: int

    def to_json(self) -> dict[str, Any]:
        return {"pole": self.order}


Limit = AlgNum | Pole


@dataclass(eq=False)
class IdealBranch:
    """One place of the curve over infinity with truncated expansions of both chart variables."""

    curve: CharCurve
    kind: str  # "infinite", "pole" or "vertical"
    field: NumberField
    expansions: dict[str, LaurentSeries]
    ramification: int
    order: int
    singular_exponent: int
    point: tuple[AlgNum, AlgNum, AlgNum] = dc_field(default=VERTICAL)
    _tail: tuple[Biv, dict[int, FieldElem], FieldElem, int] | None = None

    @property
    def local_parameter(self) -> str:
        return "t"

    def refined(self, order: int) -> IdealBranch:
        """The same branch with the second chart variable known modulo ``t^order``."""
        if self._tail is None or order <= self.order:
            return self
        v2 = self.curve.chart[1]
        G, P, kappa, mu = self._tail
        series = _assemble(self.field, G, P, kappa, mu, order)
        exps = dict(self.expansions)
        exps[v2] = series
        return IdealBranch(self.curve, self.kind, self.field, exps, self.ramification, order,
                           self.singular_exponent, self.point, self._tail)

    def valuations(self) -> dict[str, int | float]:
        out: dict[str, int | float] = {}
        for name, s in self.expansions.items():
            v = s.valuation()
            out[name] = math.inf if v is None and s.is_exact() else v if v is not None else s.prec
        return out

    def to_json(self) -> dict[str, Any]:
        def ser(s: LaurentSeries) -> dict[str, Any]:
            return {
                "exact": s.is_exact(),
                "precision": s.prec,
                "terms": [[k, [str(c) for c in v.coeffs]] for k, v in sorted(s.terms().items())],
            }
        with mpmath.workdps(25):
            root = self.field.root
            emb = [mpmath.nstr(root.real, 20), mpmath.nstr(root.imag, 20)]
        return {
            "kind": self.kind,
            "chart": list(self.curve.chart),
            "point": [c.to_json() for c in self.point],
            "local_parameter": "t",
            "ramification": self.ramification,
            "truncation_order": self.order,
            "field": {"minpoly": [str(c) for c in self.field.minpoly], "embedding": emb},
            "expansions": {k: ser(v) for k, v in self.expansions.items()},
        }


def _assemble(K: NumberField, G: Biv | None, P: dict[int, FieldElem], kappa: FieldElem, mu: int,
              order: int) -> LaurentSeries:
    exact = LaurentSeries(K, P, None)
    if G is None:
        return exact
    N = max(order - mu, 1)
    w = _solve_simple(G, N)
    tail = LaurentSeries(K, {mu + k: kappa * c for k, c in w.terms().items()}, mu + N)
    return exact + tail


def _make_branch(curve: CharCurve, kind: str, kind_tag: str, st: _State, order: int) -> IdealBranch:
    v1, v2 = curve.chart
    K = st.field
    G = st.G if kind_tag == "simple" else None
    zs = _assemble(K, G, st.P, st.kappa, st.mu, order)
    if kind == "infinite":
        xs = LaurentSeries(K, {-st.e: st.lam.inverse()}, None)
    else:
        xs = LaurentSeries(K, {0: st.x0, st.e: st.lam}, None)
    b = IdealBranch(curve, kind, K, {v1: xs, v2: zs}, st.e, max(order, st.mu + 1), st.mu,
                    VERTICAL, (G, st.P, st.kappa, st.mu) if G is not None else None)
    b.point = _point_of(b)
    return b


def _point_of(b: IdealBranch) -> tuple[AlgNum, AlgNum, AlgNum]:
    v1, v2 = b.curve.chart
    xs, zs = b.expansions[v1], b.expansions[v2]
    vx = xs.valuation()
    vz = zs.valuation()
    if vx is None or vx >= 0:
        return VERTICAL
    if vz is None or vz > vx:
        return (_one(), _zero(), _zero())
    if vz < vx:
        return VERTICAL
    ratio = zs.coefficient(vz) / xs.coefficient(vx)
    return (_one(), AlgNum.coerce(ratio), _zero())


def _dense_q(p: Poly, name: str) -> list[Fraction]:
    cs = p.coefficients_in(name)
    out = [Fraction(0)] * (max(cs) + 1)
    for k, c in cs.items():
        out[k] = c.constant_value()
    return out


def ideal_branches(curve: CharCurve, order: int = DEFAULT_ORDER) -> list[IdealBranch]:
    """Every place of the curve at which some chart coordinate has a pole."""
    f = curve.defining
    v1, v2 = curve.chart
    if f.is_constant():
        return []
    branches: list[IdealBranch] = []
    parts = [c for c in f.coefficients_in(v2).values()]
    content = parts[0]
    for c in parts[1:]:
        content = content.gcd(c)
    if not content.is_constant():
        for ext in QQ.roots_of(_dense_q(content, v1)):
            K = ext.field
            xs = LaurentSeries(K, {0: ext.root}, None)
            zs = LaurentSeries(K, {-1: 1}, None)
            branches.append(IdealBranch(curve, "vertical", K, {v1: xs, v2: zs}, 1, order, -1, VERTICAL))
    prim = f.exact_div(content) if not content.is_constant() else f
    if prim.is_constant() or v2 not in prim.variables:
        return branches
    one = QQ.one()
    # v1 -> infinity, s = 1 / v1
    dx = prim.degree(v1)
    F: Biv = {}
    for (a, j), c in zip(prim.exponents((v1, v2)), (c for _, c in prim.items())):
        F[(dx - a, j)] = QQ(c)
    start = _State(QQ, F, {}, one, 0, one, 1, QQ.zero())
    for tag, st in _expand(start, True, lambda g: True, True):
        branches.append(_make_branch(curve, "infinite", tag, st, order))
    # finite v1 = x0 where the leading coefficient in v2 vanishes
    lc = prim.leading_coefficient(v2)
    if not lc.is_constant():
        for ext in QQ.roots_of(_dense_q(lc, v1)):
            K, x0 = ext.field, ext.root
            F = {}
            for (a, j), c in zip(prim.exponents((v1, v2)), (c for _, c in prim.items())):
                for k, binom in enumerate(_binomial_row(a)):
                    term = x0 ** (a - k) * (c * binom)
                    key = (k, j)
                    F[key] = F[key] + term if key in F else term
            F = {k: c for k, c in F.items() if not c.is_zero()}
            start = _State(K, F, {}, K.one(), 0, K.one(), 1, x0)
            for tag, st in _expand(start, True, lambda g: g < 0, False):
                branches.append(_make_branch(curve, "pole", tag, st, order))
    _check_separation(branches, order)
    return branches


def _check_separation(branches: Sequence[IdealBranch], order: int) -> None:
    by_point: dict[tuple[AlgNum, ...], list[IdealBranch]] = {}
    for b in branches:
        by_point.setdefault(b.point, []).append(b)
    for group in by_point.values():
        if len(group) < 2:
            continue
        for b in group:
            if order <= b.singular_exponent:
                raise SeparationError(
                    f"order {order} does not reach the separating exponent {b.singular_exponent}")


def puiseux_branches(curve: CharCurve, point: PointAtInfinity | Sequence[AlgNum],
                     order: int = DEFAULT_ORDER) -> list[IdealBranch]:
    """Branches of the curve centred at one point at infinity."""
    coords = point.coords if isinstance(point, PointAtInfinity) else tuple(point)
    return [b for b in ideal_branches(curve, order) if b.point == coords]


# -- valuations and limits -------------------------------------------------------------------

def _chart_poly(b: IdealBranch, f: Poly | Word | str | int | Fraction) -> Poly:
    if isinstance(f, (int, Fraction)):
        return Poly.const(f)
    if isinstance(f, (Word, str)):
        f = trace_poly(f)
    v1, v2 = b.curve.chart
    if "y" in f.variables and b.curve.chart == ("x", "z"):
        # the two meridian generators of a two-bridge knot are conjugate
        f = f.subs({"y": Poly.var("x")})
    extra = set(f.variables) - {v1, v2}
    if extra:
        raise ValueError(f"function uses {sorted(extra)} outside the chart {b.curve.chart}")
    return f


def _compose(b: IdealBranch, f: Poly) -> LaurentSeries:
    if f.is_constant():
        return LaurentSeries.constant(b.field, f.constant_value())
    val = f.evaluate({n: b.expansions[n] for n in f.variables})
    return val if isinstance(val, LaurentSeries) else LaurentSeries.constant(b.field, val)


def _series_valuation(s: LaurentSeries) -> int | float:
    v = s.valuation()
    if v is not None:
        return v
    if s.is_exact():
        return math.inf
    raise IndeterminateError(f"indeterminate at this order: series vanishes modulo t^{s.prec}")


def valuation(b: IdealBranch, f: Any, max_order: int = MAX_ORDER) -> int | float:
    """Order of ``f`` in the local parameter; ``f`` may be a pair ``(num, den)``."""
    if isinstance(f, tuple):
        num, den = f
        vd = valuation(b, den, max_order)
        if vd == math.inf:
            raise ZeroDivisionError("denominator vanishes identically on the branch")
        return valuation(b, num, max_order) - vd
    g = _chart_poly(b, f)
    branch = b
    while True:
        try:
            return _series_valuation(_compose(branch, g))
        except IndeterminateError:
            if branch._tail is None or branch.order >= max_order:
                raise
            branch = branch.refined(min(2 * branch.order, max_order))


def _limit_of(s: LaurentSeries) -> Limit:
    v = s.valuation()
    if v is not None and v < 0:
        return Pole(-v)
    if v == 0:
        return AlgNum.coerce(s.coefficient(0))
    if v is not None or s.is_exact() or (s.prec is not None and s.prec > 0):
        return AlgNum.rational(0)
    raise IndeterminateError(f"indeterminate at this order: value known only modulo t^{s.prec}")


def limiting_value(b: IdealBranch, f: Any, max_order: int = MAX_ORDER) -> Limit:
    """Constant term of ``f`` along the branch, or a :class:`Pole`.

    The truncation order doubles until the answer is decided; past
    ``max_order`` an :class:`IndeterminateError` is raised.
    """
    g = _chart_poly(b, f)
    branch = b
    while True:
        try:
            return _limit_of(_compose(branch, g))
        except IndeterminateError:
            if branch._tail is None or branch.order >= max_order:
                raise
            branch = branch.refined(min(2 * branch.order, max_order))


# -- slopes, norm curves, eigenvalues ----------------------------------------------------------

def boundary_slopes(a_poly: Poly, variables: tuple[str, str] = ("M", "L")) -> frozenset[Fraction | None]:
    """Edge slopes of the Newton polygon; ``None`` stands for ``1/0``."""
    return newton_polygon(a_poly, variables).slopes


@dataclass(frozen=True)
class NormCurveResult:
    is_norm_curve: bool
    witness: Word | Poly | None = None

    def __bool__(self) -> bool:
        return self.is_norm_curve


def norm_curve_test(curve: CharCurve, peripherals: Sequence[Word | str | Poly]) -> NormCurveResult:
    """True when every nontrivial peripheral trace is nonconstant on each component.

    ``g`` is constant on an irreducible component ``h = 0`` exactly when ``h``
    divides the Jacobian ``dh/dv1 dg/dv2 - dh/dv2 dg/dv1``.
    """
    if not peripherals:
        raise ValueError("empty peripheral list")
    v1, v2 = curve.chart
    f = curve.defining
    if f.is_constant():
        raise ValueError("curve is empty")
    comps = [h for h, _ in f.factor_list()[1]]
    for item in peripherals:
        if isinstance(item, Poly):
            g, label = item, item
        else:
            w = Word.parse(item) if isinstance(item, str) else item
            if w.is_identity():
                continue
            g, label = trace_poly(w), w
            if "y" in g.variables and curve.chart == ("x", "z"):
                g = g.subs({"y": Poly.var("x")})
        for h in comps:
            jac = h.diff(v1) * g.diff(v2) - h.diff(v2) * g.diff(v1)
            if jac.is_zero() or h.divides(jac):
                return NormCurveResult(False, label)
    return NormCurveResult(True, None)


@dataclass(frozen=True)
class EigenvalueResult:
    trace: AlgNum
    eigenvalues: tuple[AlgNum, AlgNum]
    root_of_unity_order: int | None


def eigenvalues_from_trace(tau: AlgNum | int | Fraction) -> EigenvalueResult:
    """Roots of ``lam^2 - tau lam + 1`` with the root-of-unity order when there is one."""
    tau = AlgNum.coerce(tau)
    T, lam = Poly.var("T"), Poly.var("lam")
    quad = lam ** 2 - T * lam + 1
    if tau.is_rational():
        poly = quad.subs({"T": tau.to_fraction()})
    else:
        poly = resultant(Poly.from_univariate(tau.minpoly, "T"), quad, "T")
    dense = _dense_q(poly, "lam")
    with mpmath.workdps(90):
        t = tau.approx()
        r = (t + mpmath.sqrt(t * t - 4)) / 2
    first = AlgNum.from_approx(dense, r)
    second = first.inverse()
    return EigenvalueResult(tau, (first, second), is_root_of_unity(first))


def limiting_eigenvalue(b: IdealBranch, slope_word: Word | str) -> EigenvalueResult:
    """Limiting eigenvalue pair of the slope word; it must stay bounded on the branch."""
    w = Word.parse(slope_word) if isinstance(slope_word, str) else slope_word
    tau = limiting_value(b, trace_poly(w))
    if isinstance(tau, Pole):
        raise PoleError(f"not the detected boundary class: tr({w}) has a pole of order {tau.order}")
    return eigenvalues_from_trace(tau)
