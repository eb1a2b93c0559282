"""The full construction: recipe -> almost toric base -> closed sphere -> complex."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import reduce
from typing import Optional

from .compactify import ClosedSurface, close_up
from .cycles import Cycle, apply_surgery, cycles_equal, dual_cycle
from .surgery import (
    AlmostToricBase,
    EmptyBoundary,
    SurgeryError,
    base_from_recipe,
    boundary_d_values,
    recipe_cycle_surgeries,
)
from .tricomplex import (
    TriComplex,
    TriangulationError,
    TypeIIIReport,
    expected_star_cycle,
    minimize_star,
    star,
    toric_star_at,
    triangulate,
    verify_type_iii,
)

log = logging.getLogger(__name__)


@dataclass
class Construction:
    recipe: dict
    base: AlmostToricBase
    cycle: Cycle              # boundary cycle of the base
    expected_dual: Cycle
    surface: ClosedSurface
    complex: TriComplex       # after the flips at v0
    report: TypeIIIReport
    surgery_points: list      # per singular vertex: measured vs expected star


def bookkept_cycle(recipe: dict) -> Cycle:
    """Boundary cycle predicted by applying the recipe's surgeries to the toric cycle."""
    start = Cycle(int(x) for x in recipe["toric_cycle"])
    return reduce(apply_surgery, recipe_cycle_surgeries(recipe), start)


def boundary_cycle(b: AlmostToricBase, recipe: dict) -> Cycle:
    """Measured boundary cycle, or the bookkept one once the boundary has collapsed."""
    predicted = bookkept_cycle(recipe)
    try:
        measured = boundary_d_values(b)
    except EmptyBoundary:
        log.info("boundary collapsed; using the bookkept cycle %s", predicted)
        return predicted
    if not cycles_equal(measured, predicted):
        raise SurgeryError(f"boundary cycle {measured} disagrees with bookkeeping {predicted}")
    return measured


def vertex_at(t: TriComplex, piece: int, point) -> int:
    for f, ch in enumerate(t.charts):
        if t.face_piece[f] != piece:
            continue
        for i, p in enumerate(ch):
            if p == point:
                return t.faces[f][i]
    raise KeyError(f"no vertex at {tuple(point)} in piece {piece}")


def surgery_point_checks(t: TriComplex, s: ClosedSurface) -> list:
    """Compare each singular vertex's star with the prediction from its planar star."""
    out = []
    corners = t.corners_of()
    for piece, p in s.singular:
        v = vertex_at(t, piece, p)
        got = star(t, v, corners[v][0]).cycle
        rec = {"vertex": v, "point": p, "measured": got}
        try:
            toric, incident = toric_star_at(t, piece, p, s.base.cuts)
        except TriangulationError as exc:
            # the point also lies on another cut, so its neighbourhood is not planar
            rec.update(toric_star=None, incident=None, expected=None, ok=None, note=str(exc))
        else:
            exp = expected_star_cycle(toric, incident)
            rec.update(toric_star=toric, incident=[(x.kind, x.index) for x in incident],
                       expected=exp, ok=cycles_equal(exp, got))
        out.append(rec)
    return out


def construct(recipe: dict, anchor: Optional[int] = None, relaxed: Optional[bool] = None,
              refinement: Optional[int] = None) -> Construction:
    b = base_from_recipe(recipe, relaxed)
    cyc = boundary_cycle(b, recipe)
    exp = dual_cycle(cyc)
    s = close_up(b, anchor, refinement)
    t = triangulate(s)
    points = surgery_point_checks(t, s)
    m = minimize_star(t)
    report = verify_type_iii(m, exp)
    log.info("construct: cycle %s, v0 star %s, ok=%s", cyc, report.v0_cycle, report.ok)
    return Construction(recipe, b, cyc, exp, s, m, report, points)
