"""Deterministic JSON encoding of bases, closed surfaces, complexes and reports.

Rationals are written as ``[numerator, denominator]`` pairs, never floats,
and every document is dumped with sorted keys so identical inputs give
byte-identical files.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction

from .compactify import ClosedSurface
from .exactgeom import AffineMap, Mat2, Vec2
from .surgery import AlmostToricBase
from .tricomplex import TriComplex

COMPLEX_FORMAT = "cusp-complex/1"


class MalformedInput(ValueError):
    pass


def rat(x) -> list:
    x = Fraction(x)
    return [x.numerator, x.denominator]


def unrat(v) -> Fraction:
    if isinstance(v, bool):
        raise MalformedInput(f"expected a rational, got {v!r}")
    if isinstance(v, int):
        return Fraction(v)
    if (isinstance(v, list) and len(v) == 2 and all(isinstance(t, int) and not isinstance(t, bool)
                                                   for t in v) and v[1] != 0):
        return Fraction(v[0], v[1])
    raise MalformedInput(f"expected [num, den], got {v!r}")


def vec(v) -> list:
    return [rat(v[0]), rat(v[1])]


def unvec(v) -> Vec2:
    if not isinstance(v, list) or len(v) != 2:
        raise MalformedInput(f"expected a point, got {v!r}")
    return Vec2(unrat(v[0]), unrat(v[1]))


def affine(m: AffineMap) -> dict:
    a = m.linear
    return {"matrix": [[a.a, a.b], [a.c, a.d]], "translation": vec(m.translation)}


def unaffine(d) -> AffineMap:
    try:
        (a, b), (c, e) = d["matrix"]
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedInput(f"bad affine map {d!r}") from exc
    if not all(isinstance(x, int) and not isinstance(x, bool) for x in (a, b, c, e)):
        raise MalformedInput("affine matrix entries must be integers")
    lin = Mat2(a, b, c, e)
    if lin.det != 1:
        raise MalformedInput("affine matrix must have determinant 1")
    return AffineMap(lin, unvec(d["translation"]))


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=1) + "\n"


def content_hash(obj) -> str:
    return hashlib.sha256(dumps(obj).encode()).hexdigest()


# --- documents -------------------------------------------------------------------


def base_to_json(b: AlmostToricBase) -> dict:
    sides = []
    for s in b.sides:
        sides.append({
            "start": vec(s.start), "end": vec(s.end), "label": s.label, "partner": s.partner,
            "gluing": affine(s.gluing) if s.gluing is not None else None,
            "markers": [{"label": m.label, "direction": vec(m.direction)} for m in s.markers],
        })
    cuts = [{"kind": c.kind, "apex": vec(c.apex), "anchor": c.anchor, "size": c.size,
             "gluing": affine(c.gluing), "banks": [[vec(p), vec(q)] for p, q in c.banks]}
            for c in b.cuts]
    return {"ncomponents": b.ncomponents, "sides": sides, "cuts": cuts,
            "collapsed": [vec(p) for p in b.collapsed], "relaxed": b.relaxed,
            "scale": b.scale, "singular_points": [vec(p) for p in b.singular_points]}


def surface_to_json(s: ClosedSurface) -> dict:
    pieces = []
    for p in s.pieces:
        pieces.append({
            "name": p.name, "vertices": [vec(v) for v in p.vertices],
            "sides": [{"partner": list(ps.partner) if ps.partner is not None else None,
                       "gluing": affine(ps.gluing) if ps.gluing is not None else None}
                      for ps in p.sides],
        })
    out = {"pieces": pieces, "v0": [s.v0[0], vec(s.v0[1])],
           "singular": [[i, vec(p)] for i, p in s.singular], "refinement": s.refinement,
           "cone": None}
    if s.cone is not None:
        out["cone"] = {"anchor": s.cone.anchor, "identification": affine(s.cone.identification),
                       "chain_sides": list(s.cone.chain_sides)}
    return out


def complex_to_json(t: TriComplex, expected_dual=None) -> dict:
    """Half-edge ``h`` is ``edges[h]``; it runs along face ``h // 3`` from corner ``h % 3``."""
    nh = 3 * len(t.faces)
    out = {
        "format": COMPLEX_FORMAT,
        "faces": [list(f) for f in t.faces],
        "edges": [{"from": t.origin(h), "to": t.target(h), "d": t.d[h], "twin": t.twin[h]}
                  for h in range(nh)],
        "v0": t.v0,
        "expected_dual": list(expected_dual) if expected_dual is not None else None,
        "vertices": [{"id": i, "piece": v["piece"], "pos": vec(v["pos"]), "kind": v["kind"],
                      "singular": v["kind"] != "regular"}
                     for i, v in enumerate(t.vertices)],
    }
    if t.charts is not None:
        out["charts"] = [[vec(p) for p in ch] for ch in t.charts]
        out["identifications"] = [dict(half_edge=h, **affine(t.transition[h])) for h in range(nh)
                                  if not t.transition[h].is_identity()]
    return out


def _int_list(d, key, n=None):
    v = d.get(key)
    if not isinstance(v, list) or not all(isinstance(x, int) and not isinstance(x, bool)
                                          for x in v):
        raise MalformedInput(f"'{key}' must be a list of integers")
    if n is not None and len(v) != n:
        raise MalformedInput(f"'{key}' has {len(v)} entries, expected {n}")
    return v


def complex_from_json(d) -> tuple:
    """Parse a complex document; returns ``(complex, expected_dual)``."""
    if not isinstance(d, dict):
        raise MalformedInput("complex document must be a JSON object")
    if d.get("format") != COMPLEX_FORMAT:
        raise MalformedInput(f"unknown complex format {d.get('format')!r}")
    faces = d.get("faces")
    if not isinstance(faces, list) or not faces:
        raise MalformedInput("complex has no faces")
    if not all(isinstance(f, list) and len(f) == 3 and
               all(isinstance(x, int) and not isinstance(x, bool) and x >= 0 for x in f)
               for f in faces):
        raise MalformedInput("faces must be triples of vertex ids")
    nh = 3 * len(faces)
    edges = d.get("edges")
    if not isinstance(edges, list) or len(edges) != nh:
        raise MalformedInput(f"'edges' must list {nh} half-edges, three per face")
    twin, dvals = [], []
    for h, e in enumerate(edges):
        if not isinstance(e, dict):
            raise MalformedInput(f"edge {h} is not an object")
        try:
            fr, to, dv, tw = e["from"], e["to"], e["d"], e["twin"]
        except KeyError as exc:
            raise MalformedInput(f"edge {h} lacks {exc}") from exc
        if not all(isinstance(x, int) and not isinstance(x, bool) for x in (fr, to, dv, tw)):
            raise MalformedInput(f"edge {h} has non-integer fields")
        if (fr, to) != (faces[h // 3][h % 3], faces[h // 3][(h + 1) % 3]):
            raise MalformedInput(f"edge {h} does not match its face")
        if not 0 <= tw < nh:
            raise MalformedInput(f"edge {h}: twin out of range")
        twin.append(tw)
        dvals.append(dv)
    vertices = []
    for v in d.get("vertices") or []:
        try:
            vertices.append({"piece": v["piece"], "pos": unvec(v["pos"]), "kind": v["kind"]})
        except (KeyError, TypeError) as exc:
            raise MalformedInput(f"bad vertex record {v!r}") from exc
    nv = 1 + max(max(f) for f in faces)
    if vertices and len(vertices) < nv:
        raise MalformedInput("face refers to an unlisted vertex")
    v0 = d.get("v0")
    if v0 is not None and not (isinstance(v0, int) and 0 <= v0 < max(nv, len(vertices))):
        raise MalformedInput("v0 is not a vertex id")
    charts = transition = None
    if "charts" in d:
        raw = d["charts"]
        if not isinstance(raw, list) or len(raw) != len(faces):
            raise MalformedInput("one chart per face is required")
        charts = [tuple(unvec(p) for p in ch) for ch in raw]
        if any(len(ch) != 3 for ch in charts):
            raise MalformedInput("charts must list three corners")
        transition = [AffineMap.identity()] * nh
        for rec in d.get("identifications", []):
            h = rec.get("half_edge") if isinstance(rec, dict) else None
            if not isinstance(h, int) or not 0 <= h < nh:
                raise MalformedInput("transition for an unknown half-edge")
            transition[h] = unaffine(rec)
    exp = d.get("expected_dual")
    if exp is not None:
        exp = _int_list(d, "expected_dual")
    t = TriComplex([tuple(f) for f in faces], twin, dvals, charts, transition, None,
                   vertices, v0)
    return t, exp


def report_to_json(report, complex_doc) -> dict:
    out = report.to_json()
    out["complex_sha256"] = content_hash(complex_doc)
    return out
