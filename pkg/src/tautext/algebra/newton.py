"""Newton polygons of bivariate polynomials and the slopes of their edges.

For a polynomial in ``(v1, v2)`` the support is read as lattice points
``(deg v1, deg v2)``.  An edge from ``(m1, l1)`` to ``(m2, l2)`` is assigned
the boundary slope ``-(m2 - m1) / (l2 - l1)``; edges with ``l1 == l2`` get
the infinite slope, represented by ``None``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from ..errors import PointPolygonError
from .poly import Poly

__all__ = ["NewtonPolygon", "newton_polygon", "convex_hull", "edge_slope", "format_slope"]

Point = tuple[int, int]
Slope = Fraction | None


def _cross(o: Point, a: Point, b: Point) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points: Iterable[Point]) -> list[Point]:
    """Extreme points in counterclockwise order, starting at the lexicographic minimum."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower: list[Point] = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[Point] = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    return hull


def edge_slope(start: Point, end: Point) -> Slope:
    dm, dl = end[0] - start[0], end[1] - start[1]
    if dl == 0:
        return None
    return Fraction(-dm, dl)


def format_slope(s: Slope) -> str:
    if s is None:
        return "1/0"
    return str(s)


@dataclass(frozen=True)
class NewtonPolygon:
    variables: tuple[str, str]
    vertices: tuple[Point, ...]
    support: tuple[Point, ...]

    @property
    def edges(self) -> tuple[tuple[Point, Point], ...]:
        v = self.vertices
        return tuple((v[i], v[(i + 1) % len(v)]) for i in range(len(v)))

    @property
    def edge_slopes(self) -> tuple[Slope, ...]:
        """One slope per edge; a segment contributes both directions."""
        return tuple(edge_slope(a, b) for a, b in self.edges)

    @property
    def slopes(self) -> frozenset[Slope]:
        return frozenset(self.edge_slopes)

    def edge_terms(self, poly: Poly) -> list[Poly]:
        """The part of ``poly`` supported on each edge."""
        pts = list(zip(poly.exponents(self.variables), (c for _, c in poly.items())))
        return [Poly({pt: c for pt, c in pts if _cross(a, b, pt) == 0}, self.variables) for a, b in self.edges]

    def to_tsv(self) -> str:
        lines = [f"{self.variables[0]}\t{self.variables[1]}"]
        lines += [f"{m}\t{l}" for m, l in self.vertices]
        return "\n".join(lines) + "\n"


def newton_polygon(p: Poly, vars: tuple[str, str]) -> NewtonPolygon:
    """Convex hull of the support of ``p`` in the ``(vars[0], vars[1])`` plane."""
    if p.is_zero():
        raise ValueError("zero polynomial has no Newton polygon")
    extra = set(p.variables) - set(vars)
    if extra:
        raise ValueError(f"polynomial involves variables outside {vars}: {sorted(extra)}")
    support = tuple(sorted(set(p.exponents(vars))))
    if len(support) == 1:
        raise PointPolygonError("polygon is a point, no slopes")
    return NewtonPolygon(tuple(vars), tuple(convex_hull(support)), support)
