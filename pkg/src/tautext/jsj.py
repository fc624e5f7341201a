"""Sign bookkeeping for lifts of piece holonomies and the compatibility solver.

Lifts of a ``PSL_2`` representation of a piece group to ``SL_2`` form a
torsor under ``Hom(H_1(piece; Z/2), Z/2)``: a sign character ``φ`` multiplies
the image of each generator ``g`` by ``(-1)^φ(g)``.  On a boundary torus
whose image is parabolic or ``±I`` the sign of the trace is a homomorphism,
so the boundary trace signs of every lift are an affine function of ``φ``.
Matching traces across glued tori is therefore a linear system over Z/2.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Mapping, Sequence

from .algebra.cyclotomic import CycNum
from .errors import BudgetExceededError, ValidationError
from .matrix import Mat2, evaluate_word
from .words import Word

__all__ = [
    "PiecePresentation", "Mod2Map", "TypeReport", "Gluing", "JSJGraph", "LiftAssignment",
    "Infeasible", "mod2_inclusion", "check_half_lives_half_dies", "classify_type",
    "cable_holonomy", "thrice_punctured_holonomy", "cable_presentation",
    "trefoil_piece", "klein_bundle_piece", "enumerate_lifts", "lift_images",
    "solve_compatibility", "verify_assignment", "assignment_from_characters", "GEOMETRIES", "MAX_LIFT_DIM",
]

GEOMETRIES = ("hyperbolic", "cable", "klein-bundle", "torus-knot")
MAX_LIFT_DIM = 12

Vec = tuple[int, ...]


# -- linear algebra over Z/2 -------------------------------------------

def _rref(rows: Sequence[Sequence[int]], ncols: int) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form over Z/2 and the pivot columns."""
    m = [[x % 2 for x in r] for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(m)) if m[i][c]), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        for i in range(len(m)):
            if i != r and m[i][c]:
                m[i] = [(x + y) % 2 for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m[:r], pivots


def _rank(rows: Sequence[Sequence[int]], ncols: int) -> int:
    return len(_rref(rows, ncols)[1])


def _nullspace(rows: Sequence[Sequence[int]], ncols: int) -> list[Vec]:
    """Basis of {v : rows · v = 0} over Z/2."""
    red, pivots = _rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for row, p in zip(red, pivots):
            v[p] = row[f]
        basis.append(tuple(v))
    return basis


def _span(basis: Sequence[Vec]) -> list[Vec]:
    """All nonzero vectors in the span."""
    out = []
    for coeffs in itertools.product((0, 1), repeat=len(basis)):
        if any(coeffs):
            v = tuple(sum(c * b[i] for c, b in zip(coeffs, basis)) % 2 for i in range(len(basis[0])))
            if any(v) and v not in out:
                out.append(v)
    return out


def _solve(rows: Sequence[Sequence[int]], rhs: Sequence[int], ncols: int
           ) -> tuple[Vec | None, list[int]]:
    """Solve ``rows · x = rhs`` over Z/2.

    Returns ``(x, [])`` or ``(None, subset)`` where the listed equations sum
    to ``0 = 1``.
    """
    n = len(rows)
    aug = [[x % 2 for x in r] + [b % 2] + [1 if j == i else 0 for j in range(n)]
           for i, (r, b) in enumerate(zip(rows, rhs))]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, n) if aug[i][c]), None)
        if pr is None:
            continue
        aug[r], aug[pr] = aug[pr], aug[r]
        for i in range(n):
            if i != r and aug[i][c]:
                aug[i] = [(x + y) % 2 for x, y in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
    for i in range(r, n):
        if aug[i][ncols]:
            return None, [j for j in range(n) if aug[i][ncols + 1 + j]]
    x = [0] * ncols
    for i, c in enumerate(pivots):
        x[c] = aug[i][ncols]
    return tuple(x), []


# -- presentations -----------------------------------------------------

@dataclass(frozen=True)
class PiecePresentation:
    """A finitely presented piece group with boundary tori.

    ``boundary`` lists each torus by a generating pair of words.  ``images``
    optionally gives a holonomy representation on generators (determined up
    to sign); without it the piece's boundary signs follow the kernel rule
    alone.  ``q`` and ``fiber_exponent`` describe cable pieces, whose group
    satisfies ``(ab)^q h^p = 1``.
    """

    name: str
    generators: tuple[str, ...]
    relators: tuple[Word, ...]
    boundary: tuple[tuple[Word, Word], ...]
    geometry: str
    q: int | None = None
    fiber_exponent: int | None = None
    images: Mapping[str, Mat2] | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "generators", tuple(self.generators))
        object.__setattr__(self, "relators", tuple(Word.parse(r) for r in self.relators))
        object.__setattr__(self, "boundary", tuple(tuple(Word.parse(w) for w in pair)
                                                   for pair in self.boundary))
        if self.geometry not in GEOMETRIES:
            raise ValidationError(f"unknown geometry {self.geometry!r}")
        if len(set(self.generators)) != len(self.generators):
            raise ValidationError("repeated generator")
        gens = set(self.generators)
        for w in (*self.relators, *(x for pair in self.boundary for x in pair)):
            extra = w.generators() - gens
            if extra:
                raise ValidationError(f"{self.name}: word {w} uses unknown generators {sorted(extra)}")
        for pair in self.boundary:
            if len(pair) != 2:
                raise ValidationError(f"{self.name}: a boundary torus needs two generators")
            if any(w.is_identity() for w in pair):
                raise ValidationError(f"{self.name}: boundary words must be nontrivial")
        if self.geometry == "cable":
            if self.q is None or self.q < 2:
                raise ValidationError(f"{self.name}: cable pieces need q >= 2")
            if self.fiber_exponent is None:
                raise ValidationError(f"{self.name}: cable pieces need the fiber exponent")
        if self.images is not None and set(self.images) != gens:
            raise ValidationError(f"{self.name}: images must be given on exactly the generators")

    @property
    def num_tori(self) -> int:
        return len(self.boundary)

    def boundary_words(self) -> list[Word]:
        """Boundary basis in order: torus 0 first pair member, second member, torus 1, ..."""
        return [w for pair in self.boundary for w in pair]

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "name": self.name,
            "generators": list(self.generators),
            "relators": [str(r) for r in self.relators],
            "boundary": [[str(w) for w in pair] for pair in self.boundary],
            "geometry": self.geometry,
        }
        if self.q is not None:
            out["q"] = self.q
        if self.fiber_exponent is not None:
            out["fiber_exponent"] = self.fiber_exponent
        if self.images is not None:
            out["images"] = {g: [[_num_json(x) for x in row] for row in m.rows()]
                             for g, m in sorted(self.images.items())}
        return out

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> PiecePresentation:
        images = None
        if "images" in data:
            images = {g: Mat2.of([[_num_from_json(x) for x in row] for row in rows])
                      for g, rows in data["images"].items()}
        if data["geometry"] == "cable" and images is None and data.get("standard", False):
            return cable_presentation(int(data["q"]), int(data["fiber_exponent"]), data["name"])
        return cls(data["name"], tuple(data["generators"]),
                   tuple(Word.parse(r) for r in data["relators"]),
                   tuple(tuple(Word.parse(w) for w in pair) for pair in data["boundary"]),
                   data["geometry"], data.get("q"), data.get("fiber_exponent"), images)


def _num_json(x: Any) -> Any:
    x = CycNum.coerce(x)
    if x.is_rational():
        return str(x.to_fraction())
    return x.to_json()


def _num_from_json(x: Any) -> CycNum:
    if isinstance(x, Mapping):
        return CycNum([c for c in x["coords"]], int(x["conductor"]))
    return CycNum.rational(x if isinstance(x, int) else Fraction(x))


def _mat(rows: Any) -> Mat2:
    return Mat2.of(rows).map(CycNum.coerce)


def thrice_punctured_holonomy() -> dict[str, Mat2]:
    """Parabolic holonomy of the thrice-punctured sphere, ``c = ab``."""
    a = _mat([[1, 2], [0, 1]])
    b = _mat([[1, 0], [-2, 1]])
    c = _mat([[-3, 2], [-2, 1]])
    return {"a": a, "b": b, "c": c}


def cable_holonomy(q: int) -> dict[str, Mat2]:
    """Holonomy of the annulus with a cone point of order ``q``.

    ``b`` has lower-left entry ``x_q`` with ``2 + 2x_q = -(ξ + ξ^-1)`` for a
    primitive ``2q``-th root of unity ``ξ``; ``c = ab``.
    """
    if not isinstance(q, int) or q < 2:
        raise ValueError("q must be an integer >= 2")
    xi = CycNum.zeta(2 * q)
    x_q = (-(xi + xi.conjugate()) - 2) / 2
    a = _mat([[1, 2], [0, 1]])
    b = Mat2(CycNum.rational(1), CycNum.rational(0), x_q, CycNum.rational(1))
    return {"a": a, "b": b, "c": a * b}


def cable_presentation(q: int, p: int, name: str | None = None) -> PiecePresentation:
    """Cable space over the annulus with one cone point of order ``q``.

    Group ``<a, b, h | [a,h], [b,h], (ab)^q h^p>`` with boundary tori
    ``(a, h)`` and ``(b, h)``; ``h`` is the regular fiber.
    """
    from math import gcd
    if gcd(p, q) != 1:
        raise ValidationError(f"fiber exponent {p} must be coprime to q = {q}")
    hol = cable_holonomy(q)
    images = {"a": hol["a"], "b": hol["b"], "h": Mat2.identity(CycNum.rational(1), CycNum.rational(0))}
    relators = (Word("ahAH"), Word("bhBH"), Word("ab") ** q * Word.power_of("h", p))
    return PiecePresentation(name or f"cable({q},{p})", ("a", "b", "h"), relators,
                             ((Word("a"), Word("h")), (Word("b"), Word("h"))),
                             "cable", q, p, images)


def trefoil_piece(name: str = "trefoil") -> PiecePresentation:
    """Trefoil exterior ``<u, v | u^3 = v^2>`` with boundary (u^-1 v, u^3)."""
    images = {"u": _mat([[1, -1], [1, 0]]), "v": _mat([[0, -1], [1, 0]])}
    return PiecePresentation(name, ("u", "v"), (Word("uuuVV"),), ((Word("Uv"), Word("uuu")),),
                             "torus-knot", images=images)


def klein_bundle_piece(name: str = "klein") -> PiecePresentation:
    """Twisted I-bundle over the Klein bottle ``<s, t | s^2 t^2>``, boundary (st, s^2)."""
    images = {"s": _mat([[0, 1], [-1, 0]]), "t": _mat([[0, -1], [1, 0]])}
    return PiecePresentation(name, ("s", "t"), (Word("sstt"),), ((Word("st"), Word("ss")),),
                             "klein-bundle", images=images)


# -- homology ----------------------------------------------------------

def _abelianize(p: PiecePresentation, w: Word) -> Vec:
    return tuple(w.exponent_sum(g) % 2 for g in p.generators)


@dataclass(frozen=True)
class Mod2Map:
    """``i_*: H_1(∂M; Z/2) -> H_1(M; Z/2)`` in chosen bases.

    ``matrix[i][j]`` is coordinate ``i`` of the image of boundary generator
    ``j``; ``quotient_basis`` names the generators whose classes form the
    basis of ``H_1(M; Z/2)``.
    """

    piece: str
    boundary_basis: tuple[str, ...]
    quotient_basis: tuple[str, ...]
    matrix: tuple[Vec, ...]

    @property
    def boundary_dim(self) -> int:
        return len(self.boundary_basis)

    @property
    def h1_dim(self) -> int:
        return len(self.quotient_basis)

    def _rows(self) -> list[list[int]]:
        return [list(r) for r in self.matrix]

    @cached_property
    def kernel(self) -> tuple[Vec, ...]:
        return tuple(_nullspace(self._rows(), self.boundary_dim))

    @property
    def image_dim(self) -> int:
        return _rank(self._rows(), self.boundary_dim)

    def apply(self, v: Sequence[int]) -> Vec:
        return tuple(sum(r[j] * v[j] for j in range(self.boundary_dim)) % 2 for r in self.matrix)

    def to_json(self) -> dict[str, Any]:
        return {
            "piece": self.piece,
            "boundary_basis": list(self.boundary_basis),
            "quotient_basis": list(self.quotient_basis),
            "matrix": [list(r) for r in self.matrix],
            "kernel": [list(v) for v in self.kernel],
        }


def _h1(p: PiecePresentation) -> tuple[list[list[int]], list[int], list[int]]:
    n = len(p.generators)
    red, pivots = _rref([_abelianize(p, r) for r in p.relators], n)
    free = [c for c in range(n) if c not in pivots]
    return red, pivots, free


def _h1_coords(p: PiecePresentation, v: Vec) -> Vec:
    """Coordinates of an abelianized word in the quotient basis."""
    red, pivots, free = _h1(p)
    v = list(v)
    for row, c in zip(red, pivots):
        if v[c]:
            v = [(x + y) % 2 for x, y in zip(v, row)]
    return tuple(v[f] for f in free)


def mod2_inclusion(p: PiecePresentation) -> Mod2Map:
    """Boundary inclusion on Z/2 homology, from the presentation."""
    _, _, free = _h1(p)
    cols = [_h1_coords(p, _abelianize(p, w)) for w in p.boundary_words()]
    matrix = tuple(tuple(c[i] for c in cols) for i in range(len(free)))
    return Mod2Map(p.name, tuple(str(w) for w in p.boundary_words()),
                   tuple(p.generators[f] for f in free), matrix)


def check_half_lives_half_dies(m: Mod2Map) -> bool:
    """dim ker = dim im = half the boundary dimension."""
    half, rem = divmod(m.boundary_dim, 2)
    return rem == 0 and len(m.kernel) == half and m.image_dim == half


# -- types -------------------------------------------------------------

@dataclass(frozen=True)
class TypeReport:
    """Position of the kernel relative to the boundary tori."""

    piece: str
    type: int
    contained: tuple[tuple[Vec, int], ...]
    spanning: tuple[Vec, ...]
    contradiction: str | None = None

    @property
    def consistent(self) -> bool:
        return self.contradiction is None

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "piece": self.piece, "type": self.type,
            "contained": [{"class": list(v), "torus": t} for v, t in self.contained],
            "spanning": [list(v) for v in self.spanning],
        }
        if self.contradiction:
            out["contradiction"] = self.contradiction
        return out


def _torus_support(v: Vec, num_tori: int) -> list[int]:
    return [t for t in range(num_tori) if v[2 * t] or v[2 * t + 1]]


def classify_type(p: PiecePresentation, m: Mod2Map | None = None) -> TypeReport:
    """Type 1 or 3 for valid pieces; Types 0 and 2 come back with a contradiction.

    A piece with a single boundary torus has a one-dimensional kernel
    contained in that torus and is reported as Type 1.
    """
    m = m or mod2_inclusion(p)
    n = p.num_tori
    if n not in (1, 2):
        raise ValidationError(f"{p.name}: expected one or two boundary tori, got {n}", code="inconsistent-input")
    if len(m.kernel) != n:
        raise ValidationError(f"{p.name}: kernel has dimension {len(m.kernel)}, expected {n}",
                              code="inconsistent-input")
    contained: list[tuple[Vec, int]] = []
    spanning: list[Vec] = []
    for v in _span(list(m.kernel)):
        support = _torus_support(v, n)
        if len(support) == 1:
            contained.append((v, support[0]))
        else:
            spanning.append(v)
    tori = {t for _, t in contained}
    contradiction = None
    if n == 1 or (len(contained) == 2 and tori == {0, 1}):
        kind = 1
    elif len(contained) >= 2:
        kind = 0
        contradiction = ("both kernel generators lie in one torus: their lifts have trace -2 "
                         "for every lift, so their commuting product has trace +2, but it is "
                         "also a kernel class and must have trace -2")
    elif len(contained) == 1:
        kind = 2
        contradiction = ("one kernel class is contained in a torus and the other spans: the "
                         "remaining class of that torus has trace forced to the negative of a "
                         "spanning class trace for every lift, so it is lift-independent "
                         "without trace -2")
    else:
        kind = 3
    if p.geometry == "cable" and p.q is not None and contradiction is None:
        expected = 1 if p.q % 2 == 0 else 3
        if kind != expected:
            raise ValidationError(f"{p.name}: kernel gives Type {kind} but q = {p.q} predicts {expected}",
                                  code="inconsistent-input")
    return TypeReport(p.name, kind, tuple(contained), tuple(spanning), contradiction)


# -- lifts -------------------------------------------------------------

def _is_identity(m: Mat2) -> bool:
    return m.a == 1 and m.d == 1 and m.b == 0 and m.c == 0


def lift_images(p: PiecePresentation, signs: Sequence[int]) -> dict[str, Mat2]:
    """Generator images multiplied by the given signs (+1 / -1)."""
    if p.images is None:
        raise ValidationError(f"{p.name}: no holonomy images")
    return {g: p.images[g] if s == 1 else -p.images[g] for g, s in zip(p.generators, signs)}


def enumerate_lifts(p: PiecePresentation) -> list[tuple[int, ...]]:
    """Every sign vector on generators under which all relators map to ``+I``."""
    if p.images is None:
        raise ValidationError(f"{p.name}: lifts need holonomy images")
    if len(p.generators) > MAX_LIFT_DIM:
        raise BudgetExceededError(f"{p.name}: more than {MAX_LIFT_DIM} generators")
    out = []
    for signs in itertools.product((1, -1), repeat=len(p.generators)):
        imgs = lift_images(p, signs)
        if all(_is_identity(evaluate_word(r, imgs)) for r in p.relators):
            out.append(signs)
    return out


def _sign_bit(tr: Any, where: str) -> int:
    if tr == 2:
        return 0
    if tr == -2:
        return 1
    raise ValidationError(f"{where}: boundary trace {tr} is not +-2")


@dataclass
class _PieceModel:
    """Affine map from sign characters to boundary trace signs."""

    piece: PiecePresentation
    inclusion: Mod2Map
    base_signs: tuple[int, ...] | None
    sigma0: Vec

    @property
    def dim(self) -> int:
        return self.inclusion.h1_dim

    def sigma(self, phi: Sequence[int]) -> Vec:
        cols = list(zip(*self.inclusion.matrix)) if self.inclusion.matrix else [()] * len(self.sigma0)
        return tuple((s + sum(a * b for a, b in zip(phi, col))) % 2 for s, col in zip(self.sigma0, cols))

    def generator_bits(self, phi: Sequence[int]) -> tuple[int, ...]:
        """Value of the sign character on each generator."""
        p = self.piece
        out = []
        for g in p.generators:
            c = _h1_coords(p, _abelianize(p, Word(g)))
            out.append(sum(x * y for x, y in zip(c, phi)) % 2)
        return tuple(out)


def _model(p: PiecePresentation) -> _PieceModel:
    m = mod2_inclusion(p)
    words = p.boundary_words()
    if p.images is not None:
        lifts = enumerate_lifts(p)
        if not lifts:
            raise ValidationError(f"{p.name}: holonomy images admit no lift")
        base = lifts[0]
        imgs = lift_images(p, base)
        sigma0 = tuple(_sign_bit(evaluate_word(w, imgs).trace(), f"{p.name}:{w}") for w in words)
        return _PieceModel(p, m, base, sigma0)
    # kernel rule: contained kernel classes have trace -2, spanning ones equal traces
    report = classify_type(p, m)
    if not report.consistent:
        raise ValidationError(f"{p.name}: Type {report.type}: {report.contradiction}")
    rows = [list(v) for v in m.kernel]
    rhs = [1 if len(_torus_support(v, p.num_tori)) == 1 else 0 for v in m.kernel]
    sol, _ = _solve(rows, rhs, m.boundary_dim)
    if sol is None:
        raise ValidationError(f"{p.name}: kernel sign rule is not linear")
    return _PieceModel(p, m, None, sol)


# -- graphs ------------------------------------------------------------

@dataclass(frozen=True)
class Gluing:
    """Torus ``torus_a`` of ``piece_a`` glued to torus ``torus_b`` of ``piece_b``.

    Column ``j`` of ``matrix`` expresses the image of boundary generator
    ``j`` of the first torus in the generators of the second.
    """

    piece_a: int
    torus_a: int
    piece_b: int
    torus_b: int
    matrix: tuple[tuple[int, int], tuple[int, int]] = ((1, 0), (0, 1))

    def __post_init__(self) -> None:
        mat = tuple(tuple(int(x) for x in row) for row in self.matrix)
        object.__setattr__(self, "matrix", mat)
        (a, b), (c, d) = mat
        if a * d - b * c not in (1, -1):
            raise ValidationError(f"gluing matrix {mat} is not invertible over Z")

    def image_word(self, j: int, pair_b: tuple[Word, Word]) -> Word:
        (a, b), (c, d) = self.matrix
        e1, e2 = (a, c) if j == 0 else (b, d)
        return pair_b[0] ** e1 * pair_b[1] ** e2

    def to_json(self) -> dict[str, Any]:
        return {"a": [self.piece_a, self.torus_a], "b": [self.piece_b, self.torus_b],
                "matrix": [list(r) for r in self.matrix]}


@dataclass(frozen=True)
class JSJGraph:
    """Pieces and gluings of a closed graph manifold-like decomposition.

    Valid shapes: a cycle of pieces with two tori each, or a chain of two
    pieces with one torus each glued along it.
    """

    pieces: tuple[PiecePresentation, ...]
    gluings: tuple[Gluing, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "pieces", tuple(self.pieces))
        object.__setattr__(self, "gluings", tuple(self.gluings))

    def validate(self) -> str:
        """Return ``"cycle"`` or ``"chain"``; raise :class:`ValidationError` otherwise."""
        n = len(self.pieces)
        if n == 0:
            raise ValidationError("graph has no pieces")
        names = [p.name for p in self.pieces]
        if len(set(names)) != n:
            raise ValidationError("piece names must be unique")
        used: dict[tuple[int, int], int] = {}
        for k, gl in enumerate(self.gluings):
            for pi, ti in ((gl.piece_a, gl.torus_a), (gl.piece_b, gl.torus_b)):
                if not 0 <= pi < n:
                    raise ValidationError(f"gluing {k} references missing piece {pi}")
                if not 0 <= ti < self.pieces[pi].num_tori:
                    raise ValidationError(f"gluing {k} references missing torus {ti} of {names[pi]}")
                if (pi, ti) in used:
                    raise ValidationError(f"torus {ti} of {names[pi]} is glued twice")
                used[(pi, ti)] = k
        for i, p in enumerate(self.pieces):
            for t in range(p.num_tori):
                if (i, t) not in used:
                    raise ValidationError(f"torus {t} of {p.name} is not glued")
        counts = [p.num_tori for p in self.pieces]
        # connectivity
        seen, stack = {0}, [0]
        while stack:
            i = stack.pop()
            for gl in self.gluings:
                for x, y in ((gl.piece_a, gl.piece_b), (gl.piece_b, gl.piece_a)):
                    if x == i and y not in seen:
                        seen.add(y)
                        stack.append(y)
        if len(seen) != n:
            raise ValidationError("pieces are not arranged in a single circle: graph is disconnected")
        if all(c == 2 for c in counts) and len(self.gluings) == n:
            return "cycle"
        if n == 2 and counts == [1, 1]:
            return "chain"
        raise ValidationError("pieces are not arranged in a circle: each piece needs exactly two "
                              "boundary tori (or two pieces with one torus each)")

    def to_json(self) -> dict[str, Any]:
        return {"pieces": [p.to_json() for p in self.pieces],
                "gluings": [g.to_json() for g in self.gluings]}

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> JSJGraph:
        pieces = tuple(PiecePresentation.from_json(p) for p in data["pieces"])
        gluings = tuple(Gluing(g["a"][0], g["a"][1], g["b"][0], g["b"][1],
                               tuple(tuple(r) for r in g.get("matrix", ((1, 0), (0, 1)))))
                        for g in data["gluings"])
        return cls(pieces, gluings)


@dataclass(frozen=True)
class LiftAssignment:
    """Per piece: the sign character on generators and the resulting boundary traces."""

    shape: str
    characters: tuple[tuple[int, ...], ...]
    boundary_traces: tuple[tuple[Any, ...], ...]
    types: tuple[int, ...]

    def to_json(self, graph: JSJGraph) -> dict[str, Any]:
        out = []
        for p, bits, trs, kind in zip(graph.pieces, self.characters, self.boundary_traces, self.types):
            out.append({
                "piece": p.name, "type": kind,
                "sign_character": dict(zip(p.generators, bits)),
                "boundary_traces": [[{"word": str(w), "trace": str(t)} for w, t in zip(pair, trs[2 * k:2 * k + 2])]
                                    for k, pair in enumerate(p.boundary)],
            })
        return {"shape": self.shape, "pieces": out}


@dataclass(frozen=True)
class Infeasible:
    """Equations (as readable strings) that add up to ``0 = 1`` over Z/2."""

    equations: tuple[str, ...]

    def to_json(self) -> dict[str, Any]:
        return {"infeasible": list(self.equations)}


def _boundary_traces(model: _PieceModel, phi: Sequence[int]) -> tuple[Any, ...]:
    p = model.piece
    if p.images is not None and model.base_signs is not None:
        bits = model.generator_bits(phi)
        signs = [s * (-1) ** b for s, b in zip(model.base_signs, bits)]
        imgs = lift_images(p, signs)
        return tuple(evaluate_word(w, imgs).trace() for w in p.boundary_words())
    return tuple(CycNum.rational(-2 if s else 2) for s in model.sigma(phi))


def solve_compatibility(g: JSJGraph) -> LiftAssignment | Infeasible:
    """Choose lifts so that boundary traces agree across every gluing."""
    shape = g.validate()
    models = [_model(p) for p in g.pieces]
    for m in models:
        if m.dim > MAX_LIFT_DIM:
            raise BudgetExceededError(f"{m.piece.name}: H_1 has dimension {m.dim} > {MAX_LIFT_DIM}")
    types = tuple(classify_type(m.piece, m.inclusion).type for m in models)
    offsets = list(itertools.accumulate([0] + [m.dim for m in models]))
    nvars = offsets[-1]
    rows: list[list[int]] = []
    rhs: list[int] = []
    labels: list[str] = []
    for gl in g.gluings:
        ma, mb = models[gl.piece_a], models[gl.piece_b]
        for j in range(2):
            row = [0] * nvars
            const = 0
            ja = 2 * gl.torus_a + j
            # side a: sigma0_a[ja] + phi_a . i_*(e_ja)
            const += ma.sigma0[ja]
            for i, r in enumerate(ma.inclusion.matrix):
                row[offsets[gl.piece_a] + i] ^= r[ja]
            # side b: sum_k M[k][j] (sigma0_b[k] + phi_b . i_*(e_k))
            for k in range(2):
                coef = gl.matrix[k][j] % 2
                if not coef:
                    continue
                kb = 2 * gl.torus_b + k
                const += mb.sigma0[kb]
                for i, r in enumerate(mb.inclusion.matrix):
                    row[offsets[gl.piece_b] + i] ^= r[kb]
            rows.append(row)
            rhs.append(const % 2)
            pa, pb = ma.piece, mb.piece
            target = gl.image_word(j, pb.boundary[gl.torus_b])
            labels.append(f"sign tr {pa.name}:{pa.boundary[gl.torus_a][j]} = sign tr {pb.name}:{target}")
    if nvars == 0:
        sol: Vec | None = ()
        bad: list[int] = [i for i, b in enumerate(rhs) if b]
        if bad:
            return Infeasible(tuple(labels[i] for i in bad[:1]))
    else:
        sol, bad = _solve(rows, rhs, nvars)
        if sol is None:
            return Infeasible(tuple(labels[i] for i in bad))
    assert sol is not None
    characters, traces = [], []
    for m, off in zip(models, offsets):
        phi = sol[off:off + m.dim]
        characters.append(m.generator_bits(phi))
        traces.append(_boundary_traces(m, phi))
    result = LiftAssignment(shape, tuple(characters), tuple(traces), types)
    problems = verify_assignment(g, result)
    if problems:
        raise AssertionError("solver produced an invalid assignment: " + "; ".join(problems))
    return result


def assignment_from_characters(g: JSJGraph, characters: Sequence[Sequence[int]]) -> LiftAssignment:
    """Build an assignment from per-piece sign characters on generators."""
    shape = g.validate()
    models = [_model(p) for p in g.pieces]
    traces, types = [], []
    for m, bits in zip(models, characters):
        p = m.piece
        red, pivots, free = _h1(p)
        phi = tuple(bits[f] for f in free)
        if tuple(bits) != m.generator_bits(phi):
            raise ValidationError(f"{p.name}: sign character {tuple(bits)} does not vanish on relators")
        traces.append(_boundary_traces(m, phi))
        types.append(classify_type(p, m.inclusion).type)
    return LiftAssignment(shape, tuple(tuple(b) for b in characters), tuple(traces), tuple(types))


def verify_assignment(g: JSJGraph, a: LiftAssignment) -> list[str]:
    """Independent check of an assignment; returns the list of violations."""
    problems: list[str] = []
    recomputed: list[tuple[Any, ...]] = []
    for p, bits in zip(g.pieces, a.characters):
        for r in p.relators:
            if sum(b * r.exponent_sum(x) for x, b in zip(p.generators, bits)) % 2:
                problems.append(f"{p.name}: sign character is nonzero on relator {r}")
        if p.images is not None:
            imgs = _lifted(p, bits)
            for r in p.relators:
                if not _is_identity(evaluate_word(r, imgs)):
                    problems.append(f"{p.name}: lifted images violate relator {r}")
            recomputed.append(tuple(evaluate_word(w, imgs).trace() for w in p.boundary_words()))
        else:
            recomputed.append(None)  # type: ignore[arg-type]
    for i, p in enumerate(g.pieces):
        trs = recomputed[i] if recomputed[i] is not None else a.boundary_traces[i]
        for w, t in zip(p.boundary_words(), trs):
            if t != 2 and t != -2:
                problems.append(f"{p.name}: tr {w} = {t} is not +-2")

    for gl in g.gluings:
        pa, pb = g.pieces[gl.piece_a], g.pieces[gl.piece_b]
        for j in range(2):
            wa = pa.boundary[gl.torus_a][j]
            ta = _glued_trace(g, a, recomputed, gl.piece_a, gl.torus_a, (1, 0) if j == 0 else (0, 1))
            col = (gl.matrix[0][j], gl.matrix[1][j])
            tb = _glued_trace(g, a, recomputed, gl.piece_b, gl.torus_b, col)
            if ta != tb:
                problems.append(f"tr {pa.name}:{wa} = {ta} but its image in {pb.name} has trace {tb}")
    return problems


def _lifted(p: PiecePresentation, bits: Sequence[int]) -> dict[str, Mat2]:
    base = enumerate_lifts(p)[0]
    return lift_images(p, [s * (-1) ** b for s, b in zip(base, bits)])


def _glued_trace(g: JSJGraph, a: LiftAssignment, recomputed: Sequence[Any], i: int, torus: int,
                 exps: tuple[int, int]) -> Any:
    """Trace of ``g0^e0 g1^e1`` on a boundary torus of piece ``i`` under the assignment."""
    p = g.pieces[i]
    pair = p.boundary[torus]
    if recomputed[i] is not None:
        return evaluate_word(pair[0] ** exps[0] * pair[1] ** exps[1], _lifted(p, a.characters[i])).trace()
    # trace sign is a homomorphism on a parabolic torus group
    k = 2 * torus
    bits = [0 if a.boundary_traces[i][k + j] == 2 else 1 for j in range(2)]
    return CycNum.rational(-2 if (exps[0] * bits[0] + exps[1] * bits[1]) % 2 else 2)
