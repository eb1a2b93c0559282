"""Closing a base into a sphere by coning its boundary off at the monodromy fixed point.

The boundary of a base is developed into the plane; one period of the
developed polyline (the discrete hyperbola) together with the fixed point
``v0`` of the monodromy bounds a fundamental polygon of the cone.  Its two
radial sides are identified by the monodromy and its chain sides are glued
back onto the free sides of the base.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional, Sequence

from .cycles import NotHyperbolic
from .exactgeom import (
    AffineMap,
    Mat2,
    Vec2,
    lattice_length,
    lcm,
    on_segment,
    polygon_area2,
    segments_cross,
)
from .surgery import (
    AlmostToricBase,
    Cut,
    Development,
    EmptyBoundary,
    Marker,
    SurgeryError,
    develop,
    rotated_items,
)

log = logging.getLogger(__name__)


class ChainMismatch(SurgeryError):
    pass


class AnchorInvalid(SurgeryError):
    pass


def collar_monodromy(b: AlmostToricBase) -> AffineMap:
    """Monodromy ``M`` of the developed boundary for one counterclockwise loop."""
    return develop(b).monodromy


def fixed_point(m: AffineMap) -> Vec2:
    """The point with ``m(v) == v``, i.e. ``(I - N)^-1 B``.

    The identity map fixes everything; the origin is returned for it.  Any
    other map with trace 2 has no isolated fixed point.
    """
    if m.is_identity():
        return Vec2(0, 0)
    a, b, c, d = m.linear
    det = 2 - m.linear.trace  # det(I - N)
    if det == 0:
        raise NotHyperbolic(f"linear part {m.linear.rows()} has trace 2")
    bx, by = m.translation
    # (I - N)^-1 = [[1 - d, b], [c, 1 - a]] / det
    x = Fraction((1 - d) * bx + b * by) / det
    y = Fraction(c * bx + (1 - a) * by) / det
    v = Vec2(x, y) + Vec2(0, 0)  # normalises integral coordinates to int
    assert m(v) == v
    return v


def choose_refinement(v0) -> int:
    """Least ``k`` with ``k * v0`` integral."""
    k = 1
    for c in v0:
        k = lcm(k, Fraction(c).denominator)
    return k


# --- discrete hyperbola ----------------------------------------------------------------


@dataclass(frozen=True)
class ChainEdge:
    """One free side of the base as developed: endpoints and chart."""

    side: int
    chart: AffineMap
    start: Vec2
    end: Vec2


@dataclass(frozen=True)
class DiscreteHyperbola:
    vertices: tuple         # developed chain vertices over all sampled periods
    period: int             # chain edges per period
    monodromy: AffineMap
    edges: tuple            # the chain edges of period 0, starting at component 0
    first_period: int       # index of the period that ``vertices`` starts in

    def vertex(self, j: int) -> Vec2:
        """Vertex ``j`` of the infinite chain (vertex 0 starts component 0)."""
        q, r = divmod(j, self.period)
        p = self.edges[r].start
        m = self.monodromy
        if q >= 0:
            for _ in range(q):
                p = m(p)
        else:
            inv = m.inverse()
            for _ in range(-q):
                p = inv(p)
        return p


def _chain_edges(dev: Development) -> tuple:
    return tuple(ChainEdge(it.side, it.chart, it.start, it.end)
                 for it in rotated_items(dev) if it.side is not None)


def discrete_hyperbola(b: AlmostToricBase, periods: int = 1) -> DiscreteHyperbola:
    """Developed boundary vertices over ``periods`` periods before and after vertex 0."""
    if periods < 1:
        raise ValueError("periods must be positive")
    dev = develop(b)
    edges = _chain_edges(dev)
    h = DiscreteHyperbola((), len(edges), dev.monodromy, edges, -periods)
    verts = tuple(h.vertex(j) for j in range(-periods * h.period, periods * h.period + 1))
    return replace(h, vertices=verts)


def hyperbola_from_cycle(d: Sequence[int], lengths: Sequence[int], z1=(1, 0), z2=(0, 1),
                         count: Optional[int] = None) -> list:
    """Chain vertices from the recurrence ``z_{i+1} = d_i z_i - z_{i-1}``.

    ``z1`` and ``z2`` seed the directions of the first two edges (the first
    edge carries ``d[0]``); edges are laid end to end from the origin.
    """
    n = len(d)
    count = count if count is not None else n
    z = [Vec2(*z1), Vec2(*z2)]
    while len(z) < count:
        i = len(z) - 1
        z.append(z[i] * d[i % n] - z[i - 1])
    pts = [Vec2(0, 0)]
    for i in range(count):
        pts.append(pts[-1] + z[i] * lengths[i % n])
    return pts


# --- refinement -------------------------------------------------------------------------


def _scale_cut(c: Cut, k: int) -> Cut:
    return replace(c, apex=c.apex * k, gluing=c.gluing.scaled(k),
                   banks=tuple(tuple(p * k for p in bank) for bank in c.banks))


def refine(obj, k: int):
    """Order-``k`` refinement: multiply every chart by ``k``."""
    if k < 1:
        raise ValueError("refinement factor must be positive")
    if k == 1:
        return obj
    if isinstance(obj, AlmostToricBase):
        sides = tuple(replace(s, start=s.start * k, end=s.end * k,
                              gluing=s.gluing.scaled(k) if s.gluing else None)
                      for s in obj.sides)
        return replace(obj, sides=sides, cuts=tuple(_scale_cut(c, k) for c in obj.cuts),
                       collapsed=tuple(p * k for p in obj.collapsed), scale=obj.scale * k)
    if isinstance(obj, ConeDomain):
        return replace(obj, vertices=tuple(v * k for v in obj.vertices),
                       identification=obj.identification.scaled(k),
                       charts=tuple(c.scaled(k) for c in obj.charts),
                       refinement=obj.refinement * k)
    raise TypeError(f"cannot refine {type(obj).__name__}")


# --- the cone ----------------------------------------------------------------------------


@dataclass(frozen=True)
class ConeDomain:
    """Fundamental polygon ``v0, p_N, ..., p_0`` of the cone over the boundary.

    Side 0 (``v0 -> p_N``) is identified with the last side (``p_0 -> v0``) by
    ``identification``; side ``1 + t`` is the chain edge ``p_{N-t} -> p_{N-t-1}``.
    ``charts[j]`` maps base coordinates of chain edge ``j`` (counted from the
    anchor) into the cone.
    """

    vertices: tuple
    identification: AffineMap
    chain_sides: tuple        # base side index of chain edge j, j = 0..N-1
    charts: tuple
    anchor: int
    refinement: int = 1

    @property
    def v0(self) -> Vec2:
        return self.vertices[0]

    def chain_side_index(self, j: int) -> int:
        """Polygon side index of chain edge ``j``."""
        return len(self.chain_sides) - j


def _simple_polygon(vs) -> bool:
    n = len(vs)
    if polygon_area2(vs) <= 0:
        return False
    for i in range(n):
        a, b = vs[i], vs[(i + 1) % n]
        if a == b:
            return False
        for j in range(i + 1, n):
            c, d = vs[j], vs[(j + 1) % n]
            if j == i + 1 or (i == 0 and j == n - 1):
                # adjacent: must not fold back
                shared = b if j == i + 1 else a
                other_ab = a if j == i + 1 else b
                other_cd = d if j == i + 1 else c
                if on_segment(other_cd, a, b) or on_segment(other_ab, c, d):
                    return False
                continue
            if segments_cross(a, b, c, d):
                return False
            if (on_segment(c, a, b) or on_segment(d, a, b)
                    or on_segment(a, c, d) or on_segment(b, c, d)):
                return False
    return True


def build_cone(h: DiscreteHyperbola, v0, anchor: Optional[int] = None) -> ConeDomain:
    """Fundamental domain of the cone, with chain starting at vertex ``anchor``.

    With no anchor given, vertex 0 is tried first and later vertices are tried
    in turn until the polygon is simple.
    """
    m = h.monodromy
    if m.linear.trace <= 2:
        raise NotHyperbolic(f"monodromy trace {m.linear.trace} <= 2")
    v0 = Vec2(*v0)
    if not v0.is_integral():
        raise ValueError("v0 must be integral; refine first")
    n = h.period
    candidates = [anchor % n] if anchor is not None else list(range(n))
    for a in candidates:
        charts, sides, pts = [], [], [h.vertex(a)]
        for j in range(a, a + n):
            q, r = divmod(j, n)
            e = h.edges[r]
            shift = AffineMap.identity()
            for _ in range(q):
                shift = m @ shift
            charts.append(shift @ e.chart)
            sides.append(e.side)
            pts.append(shift(e.end))
        assert pts[-1] == m(pts[0])
        verts = (v0,) + tuple(reversed(pts))
        if _simple_polygon(verts):
            log.debug("cone anchored at chain vertex %d", a)
            return ConeDomain(verts, m, tuple(sides), tuple(charts), a)
        if anchor is not None:
            raise AnchorInvalid(f"cone polygon for anchor {anchor} is not simple")
    raise AnchorInvalid("no anchor gives a simple cone polygon")


# --- assembling the sphere --------------------------------------------------------


@dataclass(frozen=True)
class PieceSide:
    partner: Optional[tuple] = None   # (piece, side)
    gluing: Optional[AffineMap] = None  # partner's points -> this side's points


@dataclass(frozen=True)
class Piece:
    name: str
    vertices: tuple
    sides: tuple


@dataclass(frozen=True)
class ClosedSurface:
    pieces: tuple
    v0: tuple                     # (piece index, point)
    singular: tuple               # ((piece index, point), ...) excluding v0
    base: AlmostToricBase
    cone: Optional[ConeDomain] = None
    refinement: int = 1


def assemble_sphere(b: AlmostToricBase, c: Optional[ConeDomain]) -> ClosedSurface:
    """Glue the cone onto the free sides of the base.

    A base with no free sides is already closed; then ``c`` must be None and
    the point the boundary collapsed to plays the part of ``v0``.
    """
    has_free = any(s.free for s in b.sides)
    base_sides = []
    for i, s in enumerate(b.sides):
        if s.free:
            base_sides.append(None)
        else:
            base_sides.append(PieceSide((0, s.partner), s.gluing))
    singular = tuple((0, p) for p in b.singular_points)
    if not has_free:
        if c is not None:
            raise ChainMismatch("base has no boundary left to glue a cone to")
        if not b.collapsed:
            raise ChainMismatch("closed base without a record of its collapsed boundary")
        piece = Piece("base", tuple(s.start for s in b.sides), tuple(base_sides))
        return ClosedSurface((piece,), (0, b.collapsed[0]), singular, b, None, b.scale)
    if c is None:
        raise ChainMismatch("base has boundary but no cone was given")
    if c.refinement != b.scale:
        raise ChainMismatch(f"base refined by {b.scale} but cone by {c.refinement}")
    nchain = len(c.chain_sides)
    if sorted(c.chain_sides) != sorted(i for i, s in enumerate(b.sides) if s.free):
        raise ChainMismatch("cone chain does not match the free sides of the base")
    cone_sides = [None] * (nchain + 2)
    cone_sides[0] = PieceSide((1, nchain + 1), c.identification)
    cone_sides[nchain + 1] = PieceSide((1, 0), c.identification.inverse())
    for j, (si, chart) in enumerate(zip(c.chain_sides, c.charts)):
        ci = c.chain_side_index(j)
        s = b.sides[si]
        p, q = c.vertices[ci], c.vertices[(ci + 1) % len(c.vertices)]
        if (chart(s.start), chart(s.end)) != (q, p):
            raise ChainMismatch(f"chain edge {j} does not match base side {si}")
        if lattice_length(q - p) != s.length:
            raise ChainMismatch(f"chain edge {j} has the wrong lattice length")
        cone_sides[ci] = PieceSide((0, si), chart)
        base_sides[si] = PieceSide((1, ci), chart.inverse())
    pieces = (Piece("base", tuple(s.start for s in b.sides), tuple(base_sides)),
              Piece("cone", tuple(c.vertices), tuple(cone_sides)))
    return ClosedSurface(pieces, (1, c.v0), singular, b, c, b.scale)


def close_up(b: AlmostToricBase, anchor: Optional[int] = None,
             refinement: Optional[int] = None) -> ClosedSurface:
    """Refine so ``v0`` is integral, build the cone and glue it on."""
    try:
        dev = develop(b)
    except EmptyBoundary:
        log.info("boundary has collapsed; the base is already closed")
        return assemble_sphere(b, None)
    m = dev.monodromy
    if m.linear.trace <= 2:
        raise NotHyperbolic(f"boundary monodromy has trace {m.linear.trace}; "
                            "the boundary cycle is not negative definite")
    v0 = fixed_point(m)
    k = choose_refinement(v0)
    if refinement is not None:
        if refinement % k:
            raise ValueError(f"refinement {refinement} does not make v0={v0} integral")
        k = refinement
    log.info("v0 = %s, refinement k = %d", v0, k)
    rb = refine(b, k)
    h = discrete_hyperbola(rb)
    cone = build_cone(h, (v0 * k).to_int(), anchor)
    cone = replace(cone, refinement=rb.scale)
    return assemble_sphere(rb, cone)
