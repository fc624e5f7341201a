"""Limiting characters on pieces, reducibility tests, and the detection checklist.

A :class:`CharacterTable` records trace values of finitely many words in
one piece group.  Lookup is up to trace equivalence (cyclic rotation and
inversion), so ``tr(g^-1 h)`` answers a query for ``tr(h g^-1)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Mapping, Sequence

from .algebra.algnum import AlgNum
from .errors import MissingEntriesError, PoleError, ValidationError
from .ideal_points import IdealBranch, Pole, limiting_value
from .matrix import Mat2, evaluate_word
from .words import Word

__all__ = [
    "CharacterTable", "PieceGluing", "ConditionStatus", "TillmannReport",
    "assemble", "commutator_value", "is_reducible", "tillmann_checklist",
]

Entry = AlgNum | Pole
Pair = tuple[Word, Word]

NOT_DETERMINED_REASONS = {
    2: "needs the essential subsurfaces of the detected surface, which are not computed",
    5: "needs a neighbourhood of the ideal point inside the restriction image, which is not computed",
}


def _word(w: Word | str) -> Word:
    return Word.parse(w)


def _value(v: Any) -> Entry:
    if isinstance(v, Pole):
        return v
    return AlgNum.coerce(v)


@dataclass(frozen=True)
class CharacterTable:
    """Trace values on words of one piece; the empty word always maps to 2."""

    piece: str
    entries: Mapping[Word, Entry]
    flags: tuple[str, ...] = ()
    _keys: dict[str, Word] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        norm: dict[Word, Entry] = {}
        for w, v in self.entries.items():
            norm[_word(w)] = _value(v)
        empty = Word("")
        if empty in norm and norm[empty] != AlgNum.rational(2):
            raise ValidationError(f"table {self.piece!r}: the empty word must have trace 2")
        norm[empty] = AlgNum.rational(2)
        keys: dict[str, Word] = {}
        for w, v in norm.items():
            key = w.canonical_cyclic()
            other = keys.get(key)
            if other is not None and norm[other] != v:
                raise ValidationError(
                    f"table {self.piece!r}: {other} and {w} are trace-equivalent but have "
                    f"different values {norm[other]} and {v}")
            keys.setdefault(key, w)
        object.__setattr__(self, "entries", norm)
        object.__setattr__(self, "_keys", keys)

    # -- construction -------------------------------------------------
    @classmethod
    def from_matrices(cls, piece: str, images: Mapping[str, Mat2], words: Iterable[Word | str],
                      flags: Sequence[str] = ()) -> CharacterTable:
        """Traces of ``words`` under a representation given on generators."""
        entries = {_word(w): AlgNum.coerce(evaluate_word(_word(w), images).trace()) for w in words}
        return cls(piece, entries, tuple(flags))

    # -- lookup -------------------------------------------------------
    def get(self, word: Word | str) -> Entry | None:
        w = self._keys.get(_word(word).canonical_cyclic())
        return None if w is None else self.entries[w]

    def __getitem__(self, word: Word | str) -> Entry:
        v = self.get(word)
        if v is None:
            raise MissingEntriesError(f"table {self.piece!r} has no entry for {_word(word)}")
        return v

    def __contains__(self, word: object) -> bool:
        return isinstance(word, (Word, str)) and self.get(word) is not None

    def words(self) -> list[Word]:
        return sorted(self.entries, key=lambda w: (len(w), w.letters))

    def poles(self) -> list[Word]:
        return [w for w in self.words() if isinstance(self.entries[w], Pole)]

    # -- serialization ------------------------------------------------
    def to_json(self) -> dict[str, Any]:
        rows = []
        for w in self.words():
            v = self.entries[w]
            row: dict[str, Any] = {"word": str(w)}
            row.update(v.to_json())
            rows.append(row)
        return {"piece": self.piece, "entries": rows, "flags": list(self.flags)}

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> CharacterTable:
        entries: dict[Word, Entry] = {}
        for row in data["entries"]:
            if "pole" in row:
                entries[_word(row["word"])] = Pole(int(row["pole"]))
            elif "value" in row:
                entries[_word(row["word"])] = AlgNum.coerce(Fraction(row["value"]))
            else:
                poly = [Fraction(c) for c in row["minpoly"]]
                entries[_word(row["word"])] = AlgNum(poly, int(row.get("root_index", 0)))
        return cls(data["piece"], entries, tuple(data.get("flags", ())))


def assemble(b: IdealBranch, words: Iterable[Word | str], *, piece: str = "knot",
             allow_poles: bool = False) -> CharacterTable:
    """Limiting trace values of ``words`` (in the knot generators) along ``b``.

    A pole raises :class:`PoleError` naming the word, unless ``allow_poles``
    is set, in which case the pole is recorded and the table is flagged.
    """
    entries: dict[Word, Entry] = {}
    flags: list[str] = []
    for w in words:
        w = _word(w)
        v = limiting_value(b, w)
        if isinstance(v, Pole):
            if not allow_poles:
                raise PoleError(f"word {w} not in a bounded subgroup at this ideal point "
                                f"(pole of order {v.order})")
            if "has-poles" not in flags:
                flags.append("has-poles")
        entries[w] = v
    return CharacterTable(piece, entries, tuple(flags))


def _finite(t: CharacterTable, w: Word) -> AlgNum:
    v = t[w]
    if isinstance(v, Pole):
        raise PoleError(f"table {t.piece!r}: {w} has a pole")
    return v


def missing_entries(t: CharacterTable, pairs: Iterable[tuple[Word | str, Word | str]]) -> list[Word]:
    """Words among g, h, gh (for each pair) absent from the table."""
    out: list[Word] = []
    for g, h in pairs:
        g, h = _word(g), _word(h)
        for w in (g, h, g * h):
            if w not in t and w not in out:
                out.append(w)
    return out


def commutator_value(t: CharacterTable, g: Word | str, h: Word | str) -> AlgNum:
    """tr[g, h] = χ(g)² + χ(h)² + χ(gh)² − χ(g)χ(h)χ(gh) − 2, exactly."""
    g, h = _word(g), _word(h)
    x, y, z = _finite(t, g), _finite(t, h), _finite(t, g * h)
    return x * x + y * y + z * z - x * y * z - 2


def is_reducible(t: CharacterTable, pairs: Sequence[tuple[Word | str, Word | str]]) -> bool:
    """True when tr[g, h] = 2 for every supplied pair (reducible over tested pairs)."""
    if not pairs:
        raise ValueError("at least one pair is required")
    missing = missing_entries(t, pairs)
    if missing:
        raise MissingEntriesError(
            f"table {t.piece!r} lacks entries for: {', '.join(str(w) for w in missing)}")
    return all((commutator_value(t, g, h) - 2).is_zero() for g, h in pairs)


@dataclass(frozen=True)
class PieceGluing:
    """Boundary generator pairs of two pieces identified by a gluing map.

    ``correspondence[i] = j`` sends ``pair_a[i]`` to ``pair_b[j]``.
    """

    piece_a: str
    pair_a: Pair
    piece_b: str
    pair_b: Pair
    correspondence: tuple[int, int] = (0, 1)

    def __post_init__(self) -> None:
        object.__setattr__(self, "pair_a", tuple(_word(w) for w in self.pair_a))
        object.__setattr__(self, "pair_b", tuple(_word(w) for w in self.pair_b))
        object.__setattr__(self, "correspondence", tuple(self.correspondence))
        if len(self.pair_a) != 2 or len(self.pair_b) != 2:
            raise ValidationError("boundary pairs must have exactly two words")
        if sorted(self.correspondence) != [0, 1]:
            raise ValidationError(f"correspondence {self.correspondence} is not a bijection of pairs")

    def matched(self) -> list[tuple[Word, Word]]:
        """Corresponding words, including the product of the generating pair."""
        g, h = self.pair_a
        out = [(self.pair_a[i], self.pair_b[j]) for i, j in enumerate(self.correspondence)]
        bg, bh = (self.pair_b[self.correspondence[0]], self.pair_b[self.correspondence[1]])
        out.append((g * h, bg * bh))
        return out


@dataclass(frozen=True)
class ConditionStatus:
    condition: int
    status: str  # "pass" | "fail" | "not determined"
    witness: Any = None
    reason: str | None = None

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {"condition": self.condition, "status": self.status}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.reason is not None:
            out["reason"] = self.reason
        return out


@dataclass(frozen=True)
class TillmannReport:
    conditions: tuple[ConditionStatus, ...]

    def __getitem__(self, k: int) -> ConditionStatus:
        for c in self.conditions:
            if c.condition == k:
                return c
        raise KeyError(k)

    def to_json(self) -> list[dict[str, Any]]:
        return [c.to_json() for c in self.conditions]


def _text(v: Entry) -> str:
    return f"pole of order {v.order}" if isinstance(v, Pole) else str(v)


def tillmann_checklist(tables: Sequence[CharacterTable], gluings: Sequence[PieceGluing]) -> TillmannReport:
    """Status of the five detection conditions for a limiting character on pieces.

    Conditions 1 (finiteness), 3 (matching across gluings) and 4 (reducible
    on boundary tori) are decided exactly; 2 and 5 are reported as not
    determined.
    """
    by_piece: dict[str, CharacterTable] = {}
    for t in tables:
        if t.piece in by_piece:
            raise ValidationError(f"two tables for piece {t.piece!r}")
        by_piece[t.piece] = t
    for gl in gluings:
        for name in (gl.piece_a, gl.piece_b):
            if name not in by_piece:
                raise ValidationError(f"gluing references unknown piece {name!r}")
        for name, pair in ((gl.piece_a, gl.pair_a), (gl.piece_b, gl.pair_b)):
            missing = missing_entries(by_piece[name], [pair])
            if missing:
                raise MissingEntriesError(
                    f"table {name!r} lacks boundary entries: {', '.join(str(w) for w in missing)}")

    # 1: no table has a pole
    c1 = ConditionStatus(1, "pass")
    for t in tables:
        poles = t.poles()
        if poles:
            c1 = ConditionStatus(1, "fail", {"piece": t.piece, "word": str(poles[0])})
            break

    # 3: boundary traces agree across every gluing
    c3 = ConditionStatus(3, "pass")
    for gl in gluings:
        ta, tb = by_piece[gl.piece_a], by_piece[gl.piece_b]
        bad = next(((wa, wb) for wa, wb in gl.matched()
                    if wa in ta and wb in tb and ta[wa] != tb[wb]), None)
        if bad is not None:
            wa, wb = bad
            c3 = ConditionStatus(3, "fail", {
                "a": {"piece": gl.piece_a, "word": str(wa), "value": _text(ta[wa])},
                "b": {"piece": gl.piece_b, "word": str(wb), "value": _text(tb[wb])},
            })
            break

    # 4: each glued boundary pair is reducible
    c4 = ConditionStatus(4, "pass")
    for gl in gluings:
        for name, pair in ((gl.piece_a, gl.pair_a), (gl.piece_b, gl.pair_b)):
            t = by_piece[name]
            try:
                ok = is_reducible(t, [pair])
                witness = None if ok else str(commutator_value(t, *pair))
            except PoleError as exc:
                ok, witness = False, str(exc)
            if not ok:
                c4 = ConditionStatus(4, "fail", {"piece": name, "pair": [str(w) for w in pair],
                                                 "commutator_trace": witness})
                break
        if c4.status == "fail":
            break

    c2 = ConditionStatus(2, "not determined", reason=NOT_DETERMINED_REASONS[2])
    c5 = ConditionStatus(5, "not determined", reason=NOT_DETERMINED_REASONS[5])
    return TillmannReport((c1, c2, c3, c4, c5))
