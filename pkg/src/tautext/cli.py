"""Command-line pipeline: knot -> curves -> slopes -> ideal points -> verdicts.

The report is JSON with sorted keys and no timing data, so a fixed input
and package version always produce the same bytes.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import tempfile
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any, Callable, Mapping, Sequence

from . import __version__
from .algebra.newton import format_slope, newton_polygon
from .algebra.poly import Poly
from .azumaya import EXTENDS, extension_verdict, symbol_is_split
from .errors import PoleError, TautextError
from .ideal_points import (DEFAULT_ORDER, IdealBranch, Pole, boundary_slopes, ideal_branches,
                           limiting_eigenvalue, limiting_value, norm_curve_test)
from .jsj import (Gluing, JSJGraph, PiecePresentation, check_half_lives_half_dies, classify_type,
                  mod2_inclusion, solve_compatibility)
from .limiting import CharacterTable, PieceGluing, is_reducible, tillmann_checklist
from .twobridge import CharCurve, TwoBridgeKnot, a_polynomial, character_curve, riley_polynomial, slope_word
from .words import Word

__all__ = ["main", "run_pipeline", "load_catalog", "catalog_entry", "STAGES", "SCHEMA_VERSION",
           "CACHE_ENV", "Cache"]

SCHEMA_VERSION = 1
CACHE_ENV = "TAUTEXT_CACHE_DIR"
STAGES = ("parse", "riley", "character-curve", "a-polynomial", "slopes", "ideal-points",
          "limiting", "checklist", "verdicts", "compatibility")


# -- catalog -------------------------------------------------------------

def load_catalog() -> dict[str, Any]:
    text = resources.files("tautext").joinpath("data/catalog.json").read_text(encoding="utf-8")
    return json.loads(text)


def load_schema() -> dict[str, Any]:
    text = resources.files("tautext").joinpath("data/report.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


def _same_knot(k1: TwoBridgeKnot, k2: TwoBridgeKnot) -> str | None:
    """``"same"``, ``"mirror"`` or None, by the classification of two-bridge knots."""
    if k1.p != k2.p:
        return None
    p = k1.p
    if p == 1:
        return "same"
    q1, q2 = k1.q % p, k2.q % p
    if q1 == q2 % p or (q1 * q2) % p == 1:
        return "same"
    if q1 == (-q2) % p or (q1 * q2) % p == p - 1:
        return "mirror"
    return None


def catalog_entry(knot: TwoBridgeKnot, catalog: Mapping[str, Any] | None = None
                  ) -> tuple[dict[str, Any], str] | None:
    catalog = catalog or load_catalog()
    for entry in catalog["entries"]:
        rel = _same_knot(knot, TwoBridgeKnot.parse(entry["knot"]))
        if rel is not None:
            return entry, rel
    return None


def _piece_from_catalog(data: Mapping[str, Any]) -> PiecePresentation:
    return PiecePresentation.from_json(data)


def catalog_tables(entry: Mapping[str, Any]) -> tuple[list[CharacterTable], list[dict[str, Any]]]:
    """Catalog piece tables, each cross-checked against the shipped matrices."""
    pieces = {p["name"]: _piece_from_catalog(p) for p in entry.get("pieces", [])}
    tables, checks = [], []
    for spec in entry.get("tables", []):
        literal = CharacterTable(spec["piece"], {Word.parse(w): Fraction(v) for w, v in spec["entries"].items()},
                                 ("catalog",))
        piece = pieces[spec["piece"]]
        words = list(spec["entries"]) + list(spec.get("extra_words", []))
        computed = CharacterTable.from_matrices(spec["piece"], piece.images or {}, words, ("catalog",))
        mismatches = [w for w in spec["entries"] if literal[w] != computed[w]]
        checks.append({"piece": spec["piece"], "matches_matrices": not mismatches,
                       "mismatches": mismatches})
        tables.append(computed)
    return tables, checks


def catalog_gluings(entry: Mapping[str, Any]) -> list[PieceGluing]:
    return [PieceGluing(g["a"][0], tuple(g["a"][1]), g["b"][0], tuple(g["b"][1]),
                        tuple(g.get("correspondence", (0, 1))))
            for g in entry.get("gluings", [])]


def catalog_graph(entry: Mapping[str, Any]) -> JSJGraph | None:
    if "jsj" not in entry:
        return None
    pieces = tuple(_piece_from_catalog(p) for p in entry["pieces"])
    gluings = tuple(Gluing(g["a"][0], g["a"][1], g["b"][0], g["b"][1],
                           tuple(tuple(r) for r in g["matrix"]))
                    for g in entry["jsj"]["gluings"])
    return JSJGraph(pieces, gluings)


# -- cache -----------------------------------------------------------------

@dataclass
class Cache:
    """Polynomials keyed by a hash of the canonical knot and stage name."""

    root: Path | None
    hits: list[str] = field(default_factory=list)

    @classmethod
    def open(cls, directory: str | None) -> Cache:
        path = directory or os.environ.get(CACHE_ENV)
        return cls(Path(path) if path else None)

    def _path(self, key: str) -> Path:
        assert self.root is not None
        digest = hashlib.sha256(f"{__version__}|{key}".encode()).hexdigest()
        return self.root / f"{digest}.poly"

    def get(self, key: str) -> str | None:
        if self.root is None:
            return None
        path = self._path(key)
        if path.exists():
            self.hits.append(key)
            return path.read_text(encoding="utf-8")
        return None

    def put(self, key: str, text: str) -> None:
        if self.root is None:
            return
        self.root.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=self.root, prefix=".tmp-")
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, self._path(key))

    def poly(self, key: str, compute: Callable[[], Poly]) -> Poly:
        text = self.get(key)
        if text is not None:
            return Poly.deserialize(text)
        p = compute()
        self.put(key, p.serialize())
        return p


# -- pipeline --------------------------------------------------------------

class _Skip(Exception):
    pass


@dataclass
class _Run:
    stage_through: str
    report: dict[str, Any]
    failed: bool = False

    def allowed(self, stage: str) -> bool:
        return STAGES.index(stage) <= STAGES.index(self.stage_through)

    def run(self, stage: str, fn: Callable[[], Any], requires: Sequence[str] = ()) -> Any:
        stages = self.report["stages"]
        if not self.allowed(stage):
            stages[stage] = {"status": "skipped", "reason": f"after --stage-through {self.stage_through}"}
            raise _Skip
        blocked = [r for r in requires if stages.get(r, {}).get("status") != "ok"]
        if blocked:
            stages[stage] = {"status": "skipped", "reason": f"requires {', '.join(blocked)}"}
            raise _Skip
        try:
            out = fn()
        except TautextError as exc:
            self.failed = True
            stages[stage] = {"status": "error", "code": exc.code, "message": str(exc)}
            raise _Skip from exc
        stages[stage] = {"status": "ok"}
        return out


def _curve_json(c: CharCurve) -> dict[str, Any]:
    p = c.defining
    return {"chart": list(c.chart), "polynomial": p.serialize(), "terms": len(p),
            "degrees": {v: p.degree(v) for v in c.chart}, "total_degree": p.degree()}


def _limit_json(v: Any) -> dict[str, Any]:
    return v.to_json() if isinstance(v, Pole) else {"value": str(v), **v.to_json()}


def _branch_report(knot: TwoBridgeKnot, b: IdealBranch, slopes: Sequence[Fraction | None]) -> dict[str, Any]:
    longitude = knot.longitude
    out: dict[str, Any] = {
        "branch": b.to_json(),
        "valuations": {k: (None if v == float("inf") else v) for k, v in b.valuations().items()},
        "meridian_trace": _limit_json(limiting_value(b, Word("a"))),
        "longitude_trace": _limit_json(limiting_value(b, longitude)),
        "slope_words": [],
        "detected_slopes": [],
    }
    for s in slopes:
        w = slope_word(knot, s)
        row: dict[str, Any] = {"slope": format_slope(s), "word": str(w)}
        try:
            ev = limiting_eigenvalue(b, w)
            row["bounded"] = True
            row["trace"] = str(ev.trace)
            row["eigenvalues"] = [str(e) for e in ev.eigenvalues]
            row["root_of_unity_order"] = ev.root_of_unity_order
            out["detected_slopes"].append(format_slope(s))
        except PoleError as exc:
            row["bounded"] = False
            row["reason"] = str(exc)
        out["slope_words"].append(row)
    return out


def run_pipeline(knot_spec: str, *, stage_through: str = STAGES[-1], puiseux_order: int = DEFAULT_ORDER,
                 cache_dir: str | None = None, newton_tsv: str | None = None) -> tuple[dict[str, Any], int]:
    """Run every stage up to ``stage_through``; returns the report and an exit code."""
    if stage_through not in STAGES:
        raise ValueError(f"unknown stage {stage_through!r}; choose from {', '.join(STAGES)}")
    report: dict[str, Any] = {
        "schema_version": SCHEMA_VERSION,
        "tool_version": __version__,
        "input": knot_spec,
        "stages": {},
        "settings": {"stage_through": stage_through, "puiseux_order": puiseux_order},
    }
    run = _Run(stage_through, report)
    cache = Cache.open(cache_dir)
    state: dict[str, Any] = {}

    def stage(name: str, fn: Callable[[], Any], requires: Sequence[str] = ()) -> None:
        try:
            run.run(name, fn, requires)
        except _Skip:
            pass

    def do_parse() -> None:
        k = TwoBridgeKnot.parse(knot_spec)
        state["knot"] = k
        report["knot"] = {"p": k.p, "q": k.q, "label": k.label, "unknot": k.is_unknot()}
        found = catalog_entry(k)
        state["catalog"] = found
        report["knot"]["catalog"] = None if found is None else {"name": found[0]["name"], "relation": found[1]}

    stage("parse", do_parse)
    key = lambda name: f"{state['knot'].p}/{state['knot'].q}|{name}"  # noqa: E731

    def do_riley() -> None:
        k = state["knot"]
        p = cache.poly(key("riley"), lambda: riley_polynomial(k).defining)
        report["riley"] = {"chart": ["M", "u"], "polynomial": p.serialize(), "terms": len(p)}

    def do_curve() -> None:
        k = state["knot"]
        chart = ("x", "z")
        p = cache.poly(key("character-curve"), lambda: character_curve(k).defining)
        curve = CharCurve(p, chart)
        state["curve"] = curve
        report["character_curve"] = _curve_json(curve)
        if not k.is_unknot() and p.degree() > 0:
            nc = norm_curve_test(curve, [Word("a"), k.longitude])
            report["character_curve"]["norm_curve"] = {"is_norm_curve": nc.is_norm_curve,
                                                       "witness": None if nc.witness is None else str(nc.witness)}

    def do_apoly() -> None:
        k = state["knot"]
        p = cache.poly(key("a-polynomial"), lambda: a_polynomial(k))
        state["apoly"] = p
        report["a_polynomial"] = {"polynomial": p.serialize(), "terms": len(p)}

    def do_slopes() -> None:
        a = state["apoly"]
        if a.is_constant():
            slopes: list[Fraction | None] = []
            report["slopes"] = {"convention": "-dm/dl", "values": [], "newton_polygon": None}
        else:
            poly = newton_polygon(a, ("M", "L"))
            slopes = sorted(boundary_slopes(a), key=lambda s: (s is None, s or 0))
            report["slopes"] = {"convention": "-dm/dl", "values": [format_slope(s) for s in slopes],
                                "newton_polygon": {"vertices": [list(v) for v in poly.vertices]}}
            if newton_tsv:
                Path(newton_tsv).write_text(poly.to_tsv(), encoding="utf-8")
        state["slopes"] = slopes
        found = state.get("catalog")
        if found is not None:
            entry, rel = found
            exp = entry.get("expected_slopes", {})
            values = set(report["slopes"]["values"])
            want = set(exp.get("slopes", []))
            mirrored = {s[1:] if s.startswith("-") else ("-" + s if s != "0" else s) for s in want}
            report["slopes"]["expected"] = {
                "items": exp.get("items", []), "slopes": sorted(want),
                "contained": want <= values, "contained_in_mirror": mirrored <= values,
            }

    def do_points() -> None:
        curve = state["curve"]
        if curve.defining.degree() <= 0:
            state["branches"] = []
            report["ideal_points"] = []
            return
        branches = ideal_branches(curve, puiseux_order)
        state["branches"] = branches
        report["ideal_points"] = [{"index": i, "point": [c.to_json() for c in b.point], "kind": b.kind}
                                  for i, b in enumerate(branches)]

    def do_limiting() -> None:
        k = state["knot"]
        rows = [_branch_report(k, b, state["slopes"]) for b in state["branches"]]
        report["limiting"] = {"branches": rows}
        found = state.get("catalog")
        if found is not None and found[0].get("tables"):
            tables, checks = catalog_tables(found[0])
            state["tables"] = tables
            report["limiting"]["piece_tables"] = {
                "source": "catalog",
                "applies_to_slopes": found[0].get("applies_to_slopes", []),
                "tables": [t.to_json() for t in tables],
                "matrix_cross_check": checks,
            }

    def do_checklist() -> None:
        tables = state.get("tables")
        if not tables:
            report["checklist"] = None
            return
        gluings = catalog_gluings(state["catalog"][0])
        rep = tillmann_checklist(tables, gluings)
        boundary = []
        for gl in gluings:
            for name, pair in ((gl.piece_a, gl.pair_a), (gl.piece_b, gl.pair_b)):
                t = next(t for t in tables if t.piece == name)
                boundary.append({"piece": name, "pair": [str(w) for w in pair],
                                 "reducible_over_tested_pairs": is_reducible(t, [pair])})
        report["checklist"] = {"conditions": rep.to_json(), "boundary_reducibility": boundary}

    def do_verdicts() -> None:
        tables = state.get("tables")
        out = []
        rows = report.get("limiting", {}).get("branches", [])
        applies = set(state["catalog"][0].get("applies_to_slopes", [])) if state.get("catalog") else set()
        piece_verdicts = []
        if tables:
            pairs = state["catalog"][0].get("generating_pairs", {})
            for t in tables:
                if t.piece in pairs:
                    v = extension_verdict(t, [tuple(p) for p in pairs[t.piece]])
                    j = v.to_json()
                    if v.symbol is not None:
                        j["symbol_split"] = symbol_is_split(v.symbol)
                    piece_verdicts.append({"piece": t.piece, **j})
        for i, row in enumerate(rows):
            detected = set(row["detected_slopes"])
            if piece_verdicts and detected & applies:
                extends = [pv for pv in piece_verdicts if pv["status"] == EXTENDS]
                status = EXTENDS if extends else piece_verdicts[0]["status"]
                out.append({"branch": i, "status": status, "source": "catalog piece tables",
                            "pieces": piece_verdicts})
            else:
                out.append({"branch": i, "status": "undetermined",
                            "reason": "no piece tables for the detected slopes"})
        report["verdicts"] = out

    def do_compat() -> None:
        found = state.get("catalog")
        graph = None if found is None else catalog_graph(found[0])
        if graph is None:
            report["compatibility"] = None
            return
        pieces = []
        for p in graph.pieces:
            m = mod2_inclusion(p)
            pieces.append({"piece": p.name, "half_lives_half_dies": check_half_lives_half_dies(m),
                           "type": classify_type(p, m).to_json(), "inclusion": m.to_json()})
        res = solve_compatibility(graph)
        sol = res.to_json(graph) if hasattr(res, "shape") else res.to_json()
        report["compatibility"] = {"pieces": pieces, "solution": sol}

    stage("riley", do_riley, ["parse"])
    stage("character-curve", do_curve, ["parse"])
    stage("a-polynomial", do_apoly, ["parse"])
    stage("slopes", do_slopes, ["a-polynomial"])
    stage("ideal-points", do_points, ["character-curve"])
    stage("limiting", do_limiting, ["ideal-points", "slopes"])
    stage("checklist", do_checklist, ["limiting"])
    stage("verdicts", do_verdicts, ["limiting"])
    stage("compatibility", do_compat, ["parse"])
    report["cache"] = {"enabled": cache.root is not None, "hits": len(cache.hits)}
    code = 0
    if run.failed:
        code = 2 if report["stages"].get("parse", {}).get("status") == "error" else 1
    return report, code


def dumps(report: Mapping[str, Any]) -> str:
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tautext", description="Ideal points, slopes and extension "
                                 "verdicts for two-bridge knots.")
    ap.add_argument("--knot", required=True,
                    help="knot name (figure-eight, 4_1, trefoil, 5_2), J(b1,b2) or p/q")
    ap.add_argument("--stage-through", default=STAGES[-1], choices=STAGES,
                    help="last stage to run (default: %(default)s)")
    ap.add_argument("--puiseux-order", type=int, default=DEFAULT_ORDER,
                    help="initial truncation order for branch expansions (default: %(default)s)")
    ap.add_argument("--out", help="write the JSON report here instead of stdout")
    ap.add_argument("--cache-dir", help=f"polynomial cache directory (default: ${CACHE_ENV}, else no cache)")
    ap.add_argument("--emit-newton-tsv", metavar="PATH", help="write the Newton polygon as TSV")
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    if args.puiseux_order < 1:
        print("error: --puiseux-order must be positive", file=sys.stderr)
        return 2
    report, code = run_pipeline(args.knot, stage_through=args.stage_through,
                                puiseux_order=args.puiseux_order, cache_dir=args.cache_dir,
                                newton_tsv=args.emit_newton_tsv)
    text = dumps(report)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    for name, st in report["stages"].items():
        if st["status"] == "error":
            print(f"error in stage {name} [{st['code']}]: {st['message']}", file=sys.stderr)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
