"""Almost-toric bases: moment polygons with surgeries recorded as glued slits.

A base is stored as one planar polygon traversed counterclockwise.  Every
side is either *free* (a piece of a boundary component) or *glued* to a
partner side by an integral-affine map.  An internal blow-up removes a
lattice triangle resting on a free side and glues its two remaining edges;
a node smoothing cuts a slit from a corner into the interior and glues the
two banks of the slit.  Boundary invariants are read off by developing the
boundary across these gluings.

Zero-length boundary components carry no side of their own.  They are
recorded as markers (label and direction) attached to the side after which
they occur.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import product
from typing import Optional, Sequence

from .cycles import Cycle
from .exactgeom import (
    AffineMap,
    LatticePolygon,
    Mat2,
    Vec2,
    complete_basis,
    det2,
    dot2,
    lattice_length,
    on_segment,
    orient,
    point_in_polygon,
    polygon_area2,
    primitive,
    rot90,
    segments_cross,
)

log = logging.getLogger(__name__)

BLOWUP_MATRIX = Mat2(2, 1, -1, 0)     # in the basis (e1, e2) of the removed triangle
SMOOTHING_MATRIX = Mat2(0, 1, -1, 2)  # in the basis (x, y) at the smoothed corner


class SurgeryError(Exception):
    """Base class for geometric failures while building a base."""


class NotToric(SurgeryError):
    pass


class NonClosing(SurgeryError):
    pass


class Degenerate(SurgeryError):
    pass


class NoSolution(SurgeryError):
    pass


class DoesNotFit(SurgeryError):
    pass


class EdgeTooShort(SurgeryError):
    pass


class CutCollision(SurgeryError):
    pass


class EmptyBoundary(SurgeryError):
    pass


class Unsupported(SurgeryError):
    pass


# --- toric input ----------------------------------------------------------------


def _upper(v) -> bool:
    # angle in [0, pi)
    return v[1] > 0 or (v[1] == 0 and v[0] > 0)


def fan_from_toric_cycle(c: Sequence[int]) -> list:
    """Rays of the smooth complete fan whose boundary cycle is ``c``."""
    c = tuple(c)
    n = len(c)
    if n < 3:
        raise NotToric(f"a smooth complete toric surface has at least 3 rays, got {n}")
    rays = [Vec2(1, 0), Vec2(0, 1)]
    for i in range(1, n + 1):
        rays.append(rays[i] * c[i % n] - rays[i - 1])
    if rays[n] != rays[0] or rays[n + 1] != rays[1]:
        raise NotToric(f"fan recurrence for {c} does not close up")
    rays = rays[:n]
    winding = sum(1 for i in range(n) if not _upper(rays[i]) and _upper(rays[(i + 1) % n]))
    if winding != 1:
        raise NotToric(f"fan for {c} winds {winding} times")
    return rays


def edge_directions(rays: Sequence) -> list:
    """Boundary edge directions ``z_i``: the rays turned a quarter counterclockwise."""
    return [rot90(r) for r in rays]


def solve_lengths(rays: Sequence, support) -> list:
    """Least positive lengths on ``support`` (zero elsewhere) closing the polygon.

    "Least" means smallest total length; ties go to the lexicographically
    smaller vector.
    """
    z = edge_directions(rays)
    sup = sorted(set(int(i) for i in support))
    if not sup:
        raise NoSolution("empty support")
    if any(not 0 <= i < len(z) for i in sup):
        raise IndexError(f"support {sup} out of range")
    out = [0] * len(z)
    pair = next(((a, b) for a in sup for b in sup if a < b and det2(z[a], z[b]) != 0), None)
    if pair is None:
        raise NoSolution("support directions do not span the plane")
    a, b = pair
    rest = [i for i in sup if i not in pair]
    dab = det2(z[a], z[b])

    def complete(vals):
        # solve m_a z_a + m_b z_b = -sum(vals_i z_i)
        sx = -sum(v * z[i][0] for i, v in zip(rest, vals))
        sy = -sum(v * z[i][1] for i, v in zip(rest, vals))
        ma = Fraction(det2((sx, sy), z[b]), dab)
        mb = Fraction(det2(z[a], (sx, sy)), dab)
        if ma.denominator == 1 and mb.denominator == 1 and ma > 0 and mb > 0:
            return int(ma), int(mb)
        return None

    if not rest:
        raise NoSolution(f"support {sup} has two independent directions only")
    bound = 4 * len(sup)
    while bound <= 4096:
        best = None
        for vals in product(range(1, bound + 1), repeat=len(rest)):
            if sum(vals) > bound:
                continue
            ab = complete(vals)
            if ab is None:
                continue
            full = dict(zip(rest, vals))
            full[a], full[b] = ab
            vec = [full.get(i, 0) for i in range(len(z))]
            key = (sum(vec), vec)
            if best is None or key < best:
                best = key
        if best is not None and best[0] <= bound:
            return best[1]
        bound *= 2
        if len(rest) > 3 and bound > 64:
            break
    raise NoSolution(f"no positive closing lengths on support {sup}")


# --- the base ---------------------------------------------------------------------


@dataclass(frozen=True)
class Marker:
    """A boundary component of length zero, with its (planar) direction."""

    label: int
    direction: Vec2


@dataclass(frozen=True)
class Side:
    start: Vec2
    end: Vec2
    label: Optional[int] = None       # component index for free sides
    partner: Optional[int] = None     # index of the side glued to this one
    gluing: Optional[AffineMap] = None  # partner's points -> this side's points
    markers: tuple = ()

    @property
    def free(self) -> bool:
        return self.partner is None

    @property
    def length(self) -> int:
        return lattice_length(self.end - self.start)

    @property
    def direction(self) -> Vec2:
        return primitive(self.end - self.start)


@dataclass(frozen=True)
class Cut:
    kind: str                 # "internal_blowup" or "node_smoothing"
    apex: Vec2
    anchor: int               # component (blow-up) or node (smoothing) index
    size: int
    gluing: AffineMap         # identifies the second bank with the first
    banks: tuple              # ((p, q), (q', p')) endpoints of the two glued sides


@dataclass(frozen=True)
class BoundaryEdge:
    direction: Vec2
    length: int
    label: int


@dataclass(frozen=True)
class AlmostToricBase:
    sides: tuple
    ncomponents: int
    cuts: tuple = ()
    collapsed: tuple = ()     # planar points of boundary that has shrunk to nothing
    relaxed: bool = False
    scale: int = 1

    @property
    def outline(self) -> LatticePolygon:
        return LatticePolygon([s.start for s in self.sides])

    @property
    def singular_points(self) -> list:
        out = []
        for c in self.cuts:
            if c.apex not in out:
                out.append(c.apex)
        return out

    @property
    def boundary(self) -> list:
        """Boundary components as developed edges (direction, total length)."""
        try:
            comps = boundary_components(self)
        except EmptyBoundary:
            return [BoundaryEdge(Vec2(0, 0), 0, i) for i in range(self.ncomponents)]
        return [BoundaryEdge(c.direction, c.length, c.label) for c in comps]

    def next_index(self, i: int) -> int:
        return (i + 1) % len(self.sides)

    def prev_index(self, i: int) -> int:
        return (i - 1) % len(self.sides)


def moment_polygon(rays: Sequence, lengths: Sequence[int]) -> AlmostToricBase:
    """Lattice polygon with edge ``i`` in direction ``z_i`` of lattice length ``m_i``."""
    z = edge_directions(rays)
    lengths = [int(m) for m in lengths]
    if len(lengths) != len(z):
        raise ValueError("need one length per ray")
    if any(m < 0 for m in lengths):
        raise ValueError("lengths must be nonnegative")
    sx = sum(m * d[0] for m, d in zip(lengths, z))
    sy = sum(m * d[1] for m, d in zip(lengths, z))
    if (sx, sy) != (0, 0):
        raise NonClosing(f"sum of m_i z_i is {(sx, sy)}, not 0")
    if sum(1 for m in lengths if m > 0) < 2:
        raise Degenerate("fewer than two positive-length edges")
    pos = Vec2(0, 0)
    sides = []
    pending = []  # zero-length edges before the first positive one
    for i, (m, d) in enumerate(zip(lengths, z)):
        if m == 0:
            if sides:
                last = sides[-1]
                sides[-1] = replace(last, markers=last.markers + (Marker(i, d),))
            else:
                pending.append(Marker(i, d))
            continue
        nxt = pos + d * m
        sides.append(Side(pos, nxt, label=i))
        pos = nxt
    if pending:
        last = sides[-1]
        sides[-1] = replace(last, markers=last.markers + tuple(pending))
    if polygon_area2([s.start for s in sides]) <= 0:
        raise Degenerate("moment polygon has empty interior")
    return AlmostToricBase(tuple(sides), len(lengths))


# --- developing the boundary -------------------------------------------------------


@dataclass(frozen=True)
class BoundaryItem:
    """One step of the developed boundary: a free side or a zero-length marker."""

    label: int
    side: Optional[int]        # index of the free side, None for markers
    chart: AffineMap           # planar coordinates -> developed coordinates
    start: Vec2                # developed endpoints (equal for markers)
    end: Vec2
    direction: Vec2            # developed primitive direction

    @property
    def length(self) -> int:
        return lattice_length(self.end - self.start)

    def moved(self, m: AffineMap) -> "BoundaryItem":
        return BoundaryItem(self.label, self.side, m @ self.chart, m(self.start),
                            m(self.end), m.linear @ self.direction)


@dataclass(frozen=True)
class Development:
    items: tuple
    monodromy: AffineMap
    start_side: int


def develop(b: AlmostToricBase) -> Development:
    """Walk once around the boundary, crossing glued sides by their gluings.

    The chart of the first free side (in polygon order) is the identity.  The
    composite chart after one loop is the monodromy ``M``.
    """
    sides = b.sides
    s0 = next((i for i, s in enumerate(sides) if s.free), None)
    if s0 is None:
        raise EmptyBoundary("no boundary of positive length")
    dev = AffineMap.identity()
    items = []

    def emit_markers(side_idx):
        for mk in sides[side_idx].markers:
            p = dev(sides[side_idx].end)
            items.append(BoundaryItem(mk.label, None, dev, p, p, dev.linear @ mk.direction))

    i = s0
    steps = 0
    limit = 4 * len(sides) + 4
    while True:
        s = sides[i]
        items.append(BoundaryItem(s.label, i, dev, dev(s.start), dev(s.end),
                                  dev.linear @ s.direction))
        emit_markers(i)
        j = b.next_index(i)
        while not sides[j].free:
            dev = dev @ sides[j].gluing
            j = sides[j].partner
            emit_markers(j)
            j = b.next_index(j)
            steps += 1
            if steps > limit:
                raise SurgeryError("boundary walk does not close up")
        if j == s0:
            break
        i = j
        steps += 1
        if steps > limit:
            raise SurgeryError("boundary walk does not close up")
    return Development(tuple(items), dev, s0)


def _rotation_start(items) -> int:
    n = len(items)
    for r in range(n):
        if items[r].label == 0 and items[r - 1].label != 0:
            return r
    return 0


def rotated_items(dev: Development) -> list:
    """Developed items starting at component 0, later-period items moved by ``M``."""
    items = list(dev.items)
    r = _rotation_start(items)
    return items[r:] + [it.moved(dev.monodromy) for it in items[:r]]


@dataclass(frozen=True)
class Component:
    label: int
    direction: Vec2
    length: int
    items: tuple


def boundary_components(b: AlmostToricBase, dev: Optional[Development] = None) -> list:
    dev = dev or develop(b)
    comps = []
    for it in rotated_items(dev):
        if comps and comps[-1][0] == it.label:
            comps[-1][1].append(it)
        else:
            comps.append((it.label, [it]))
    if len(comps) > 1 and comps[0][0] == comps[-1][0]:
        raise SurgeryError("boundary component split across the walk start")
    labels = [lab for lab, _ in comps]
    if labels != list(range(b.ncomponents)):
        raise SurgeryError(f"boundary labels out of order: {labels}")
    out = []
    for lab, its in comps:
        dirs = {it.direction for it in its}
        if len(dirs) != 1:
            raise SurgeryError(f"component {lab} is not straight after developing: {dirs}")
        out.append(Component(lab, its[0].direction, sum(it.length for it in its), tuple(its)))
    return out


def boundary_d_values(b: AlmostToricBase) -> Cycle:
    """Negative self-intersections ``d_i`` with ``z_{i-1} + z_{i+1} = d_i z_i``."""
    dev = develop(b)
    comps = boundary_components(b, dev)
    N = dev.monodromy.linear
    Ninv = N.inverse()
    z = [c.direction for c in comps]
    n = len(z)
    out = []
    for i in range(n):
        prev = z[i - 1] if i > 0 else Ninv @ z[n - 1]
        nxt = z[i + 1] if i + 1 < n else N @ z[0]
        total = prev + nxt
        if det2(total, z[i]) != 0:
            raise Degenerate(f"corner data at component {i} is not that of a smooth cycle")
        zi = z[i]
        k = Fraction(total[0], zi[0]) if zi[0] != 0 else Fraction(total[1], zi[1])
        out.append(int(k))
    return Cycle(out)


# --- geometric validation ----------------------------------------------------------


def _collinear_overlap(a, b, c, d) -> bool:
    """Closed segments on a common line sharing more than a point."""
    if orient(a, b, c) != 0 or orient(a, b, d) != 0:
        return False
    u = b - a
    ts = sorted([dot2(a - a, u), dot2(b - a, u)])
    us = sorted([dot2(c - a, u), dot2(d - a, u)])
    return max(ts[0], us[0]) < min(ts[1], us[1])


def _segments_meet_beyond(a, b, c, d, allowed=()) -> bool:
    """Closed segments ``[a,b]`` and ``[c,d]`` meet somewhere other than at allowed points."""
    if segments_cross(a, b, c, d):
        return True
    if _collinear_overlap(a, b, c, d):
        return True
    for p, (x, y) in ((c, (a, b)), (d, (a, b)), (a, (c, d)), (b, (c, d))):
        if on_segment(p, x, y) and p not in allowed:
            return True
    return False


def _is_spike(s1: Side, s2: Side) -> bool:
    return s1.start == s2.end and s1.end == s2.start


def _check_polygon(sides, relaxed: bool):
    """The side cycle bounds a (weakly) simple polygon of positive area.

    Sides may only overlap when they form a slit glued to itself; vertices may
    only coincide when they are the same singular point reached twice.
    """
    n = len(sides)
    if n < 3 or polygon_area2([s.start for s in sides]) <= 0:
        raise DoesNotFit("region would have no interior")
    for i in range(n):
        for j in range(i + 1, n):
            a, b = sides[i], sides[j]
            if j == i + 1 or (i == 0 and j == n - 1):
                # consecutive sides: only the shared vertex, unless they form a slit
                if _collinear_overlap(a.start, a.end, b.start, b.end):
                    if not (_is_spike(a, b) and a.partner == j):
                        raise DoesNotFit("consecutive sides fold back")
                continue
            if segments_cross(a.start, a.end, b.start, b.end):
                raise DoesNotFit("sides cross")
            if _collinear_overlap(a.start, a.end, b.start, b.end):
                raise DoesNotFit("sides overlap")
            shared = {a.start, a.end} & {b.start, b.end}
            for p in (a.start, a.end):
                if on_segment(p, b.start, b.end) and p not in (b.start, b.end):
                    raise DoesNotFit("vertex lies on another side")
            for p in (b.start, b.end):
                if on_segment(p, a.start, a.end) and p not in (a.start, a.end):
                    raise DoesNotFit("vertex lies on another side")
            if shared and not relaxed:
                # a pinch point is only legitimate at the apex of a slit
                for p in shared:
                    if not _on_slit(sides, p):
                        raise DoesNotFit(f"boundary touches itself at {tuple(p)}")


def _on_slit(sides, p) -> bool:
    """``p`` is an end of a slit (two consecutive sides retracing each other)."""
    n = len(sides)
    for i, s in enumerate(sides):
        t = sides[(i + 1) % n]
        if _is_spike(s, t) and p in (s.start, s.end):
            return True
    return False


def _folds_back(s1: Side, s2: Side) -> bool:
    u, w = s1.end - s1.start, s2.end - s2.start
    return det2(u, w) == 0 and dot2(u, w) < 0


def _split_glued(recs: list, k: int, m: Vec2, fresh: int) -> list:
    """Split the glued side ``recs[k]`` at ``m`` and its partner at the matching point."""
    r = recs[k]
    s = r["side"]
    byid = {x["id"]: x for x in recs}
    rp = byid[s.partner]
    sp = rp["side"]
    mp = s.gluing.inverse()(m)
    ida, idb, idp1, idp2 = r["id"], fresh, fresh + 1, rp["id"]
    halves = [dict(side=replace(s, end=m, partner=idp2, markers=()), id=ida),
              dict(side=replace(s, start=m, partner=idp1), id=idb)]
    phalves = [dict(side=replace(sp, end=mp, partner=idb, markers=()), id=idp1),
               dict(side=replace(sp, start=mp, partner=ida), id=idp2)]
    out = []
    for x in recs:
        if x is r:
            out += halves
        elif x is rp:
            out += phalves
        else:
            out.append(x)
    return out


def remove_spikes(sides: list) -> list:
    """Cancel consecutive sides that retrace each other but are glued elsewhere.

    Two removed triangles sharing an edge leave that edge as a zero-width
    spike ``Q -> C -> Q``.  The spike is deleted and the two sides it was glued
    to are glued directly to each other.  When only part of an edge is shared
    the longer side (and its partner) is split first.
    """
    recs = [dict(side=s, id=i) for i, s in enumerate(sides)]
    fresh = len(recs)
    carry = ()
    changed = True
    while changed:
        changed = False
        n = len(recs)
        for k in range(n):
            r1, r2 = recs[k], recs[(k + 1) % n]
            s1, s2 = r1["side"], r2["side"]
            if s1.free or s2.free or s1.partner == r2["id"] or not _folds_back(s1, s2):
                continue
            if not _is_spike(s1, s2):
                if s1.length > s2.length:
                    recs = _split_glued(recs, k, s2.end, fresh)
                else:
                    recs = _split_glued(recs, (k + 1) % n, s1.start, fresh)
                fresh += 2
                changed = True
                break
            p1, p2 = s1.partner, s2.partner
            byid = {r["id"]: r for r in recs}
            ra, rb = byid[p1], byid[p2]
            ga = ra["side"].gluing @ s2.gluing
            ra["side"] = replace(ra["side"], partner=rb["id"], gluing=ga)
            rb["side"] = replace(rb["side"], partner=ra["id"], gluing=ga.inverse())
            carry += s1.markers + s2.markers
            recs = [r for r in recs if r is not r1 and r is not r2]
            changed = True
            break
    # markers only steer the boundary walk; once no free side is left they are moot
    if carry and any(r["side"].free for r in recs):
        raise Unsupported("zero-length boundary inside a cancelled spike")
    return _reindex([r["side"] for r in recs], [r["id"] for r in recs])


def _reindex(sides: list, ids: list) -> list:
    pos = {ident: i for i, ident in enumerate(ids)}
    out = []
    for s in sides:
        if s.partner is not None:
            s = replace(s, partner=pos[s.partner])
        out.append(s)
    for i, s in enumerate(out):
        if s.partner is not None:
            assert out[s.partner].partner == i
    return out


# --- surgeries -------------------------------------------------------------------


def component_pieces(b: AlmostToricBase) -> dict:
    """Free side indices of each component, in boundary order."""
    out = {i: [] for i in range(b.ncomponents)}
    try:
        items = rotated_items(develop(b))
    except EmptyBoundary:
        return out
    for it in items:
        if it.side is not None:
            out[it.label].append(it.side)
    return out


def centered_shear(u: Vec2) -> Vec2:
    """The ``w`` with ``det(u, w) = 1`` whose apex sits most nearly over the base midpoint."""
    w0 = complete_basis(u)
    uu = dot2(u, u)
    # w = w0 + t u, minimise |2 (w . u) - u . u| over integers t
    t0 = Fraction(uu - 2 * dot2(w0, u), 2 * uu)
    cands = {t0.numerator // t0.denominator, -((-t0.numerator) // t0.denominator)}
    best = min(cands, key=lambda t: (abs(2 * dot2(w0 + u * t, u) - uu), dot2(w0 + u * t, u)))
    return w0 + u * best


def internal_blowup(b: AlmostToricBase, edge: int, size: int = 1, offset: Optional[int] = None,
                    shear: int = 0, relaxed: Optional[bool] = None) -> AlmostToricBase:
    """Remove ``size`` times a basis triangle resting on component ``edge``.

    ``offset`` is the lattice distance from the start of the component's free
    length (removed stretches do not count) to the base of the triangle; by
    default the triangle is centred on the component.
    ``shear`` moves the apex by whole steps along the edge away from the
    centred position.
    """
    relaxed = b.relaxed if relaxed is None else relaxed
    if not 0 <= edge < b.ncomponents:
        raise IndexError(f"component {edge} out of range")
    if size < 1:
        raise ValueError("blow-up size must be positive")
    pieces = component_pieces(b)[edge]
    total = sum(b.sides[k].length for k in pieces)
    if offset is None:
        offset = max(total - size, 0) // 2
    if offset < 0 or offset + size > total:
        raise EdgeTooShort(f"component {edge} has free length {total}; "
                           f"cannot place size {size} at offset {offset}")
    cum = 0
    for k in pieces:
        ln = b.sides[k].length
        if cum <= offset and offset + size <= cum + ln:
            break
        cum += ln
    else:
        raise DoesNotFit("triangle base would straddle an earlier blow-up")
    side = b.sides[k]
    p, q = side.start, side.end
    u = side.direction
    b1 = p + u * (offset - cum)
    b2 = b1 + u * size
    w = centered_shear(u) + u * shear
    v = b1 + w * size
    e1, e2 = -w, u - w
    E = Mat2.from_columns(e1, e2)
    lin = E @ BLOWUP_MATRIX @ E.inverse()
    glue = AffineMap.fixing(v, lin)
    assert glue(b2) == b1 and lin @ u == u

    if not relaxed:
        _check_blowup_clear(b, k, b1, b2, v)

    new, ids = [], []
    full = b1 == p and b2 == q
    if b1 != p:
        new.append(replace(side, end=b1, markers=()))
        ids.append(("old", k, 0))
    a_side = Side(b1, v, partner=("new", k, 2), gluing=glue)
    markers_b = side.markers if b2 == q else ()
    if full and len(pieces) == 1:
        markers_b = (Marker(edge, u),) + markers_b
    b_side = Side(v, b2, partner=("new", k, 1), gluing=glue.inverse(), markers=markers_b)
    new += [a_side, b_side]
    ids += [("new", k, 1), ("new", k, 2)]
    if b2 != q:
        new.append(replace(side, start=b2))
        ids.append(("old", k, 3))

    sides, keys = [], []
    for i, s in enumerate(b.sides):
        if i == k:
            sides += new
            keys += ids
        else:
            if s.partner is not None:
                s = replace(s, partner=("old", s.partner, 0))
            sides.append(s)
            keys.append(("old", i, 0))
    # old partners point at ("old", idx, 0); every old glued side is unsplit
    sides = _reindex(sides, keys)
    if relaxed:
        sides = remove_spikes(sides)
    _check_polygon(sides, relaxed)
    collapsed = b.collapsed
    if full and len(pieces) == 1:
        collapsed = collapsed + (b1,)
    cut = Cut("internal_blowup", v, edge, size, glue, ((b1, v), (v, b2)))
    log.debug("blow-up on component %d: base %s-%s apex %s", edge, b1, b2, v)
    return replace(b, sides=tuple(sides), cuts=b.cuts + (cut,), collapsed=collapsed)


def _check_blowup_clear(b: AlmostToricBase, k: int, b1, b2, v):
    if point_in_polygon(v, [s.start for s in b.sides]) != 1:
        raise DoesNotFit(f"apex {tuple(v)} is not in the interior")
    tri = [b1, b2, v]
    for i, s in enumerate(b.sides):
        if i == k:
            continue
        allowed = tuple(x for x in (b1, b2) if x in (s.start, s.end))
        for x, y in ((b1, v), (v, b2)):
            if _segments_meet_beyond(x, y, s.start, s.end, allowed):
                raise DoesNotFit(f"triangle edge {tuple(x)}-{tuple(y)} meets the boundary or a cut")
        if point_in_polygon(s.start, tri) == 1:
            raise DoesNotFit("triangle would swallow part of the boundary or a cut")


def node_smoothing(b: AlmostToricBase, vertex: int, n: int = 1,
                   relaxed: Optional[bool] = None) -> AlmostToricBase:
    """Cut from the node between components ``vertex`` and ``vertex + 1`` along ``x + y``."""
    relaxed = b.relaxed if relaxed is None else relaxed
    nc = b.ncomponents
    if not 0 <= vertex < nc:
        raise IndexError(f"node {vertex} out of range")
    if nc < 2:
        raise Unsupported("cannot smooth the node of a one-component boundary")
    if n < 1:
        raise ValueError("cut length must be positive")
    pieces = component_pieces(b)
    i, j = vertex, (vertex + 1) % nc
    if not pieces[i] or not pieces[j]:
        raise Unsupported("node smoothing needs both adjacent components of positive length")
    k1, k2 = pieces[i][-1], pieces[j][0]
    s1, s2 = b.sides[k1], b.sides[k2]
    if b.next_index(k1) != k2 or s1.markers:
        raise Unsupported("the node is not a plain corner of the planar region")
    c = s1.end
    y, x = -s1.direction, s2.direction
    if det2(x, y) != 1:
        raise Degenerate("corner is not smooth")
    v = c + (x + y) * n
    E = Mat2.from_columns(x, y)
    lin = E @ SMOOTHING_MATRIX @ E.inverse()
    glue = AffineMap.fixing(c, lin)
    assert lin @ x == -y and glue(v) == v

    if point_in_polygon(v, [s.start for s in b.sides]) != 1:
        raise CutCollision(f"cut end {tuple(v)} is not in the interior")
    for idx, s in enumerate(b.sides):
        allowed = (c,) if idx in (k1, k2) else ()
        if _segments_meet_beyond(c, v, s.start, s.end, allowed):
            raise CutCollision("cut meets the boundary or another cut")

    a_side = Side(c, v, partner=k1 + 2, gluing=glue)
    b_side = Side(v, c, partner=k1 + 1, gluing=glue.inverse())
    sides = []
    for idx, s in enumerate(b.sides):
        if s.partner is not None and s.partner > k1:
            s = replace(s, partner=s.partner + 2)
        sides.append(s)
        if idx == k1:
            sides += [a_side, b_side]

    def relabel(lab):
        if vertex == nc - 1:
            return 0 if lab == nc - 1 else lab
        if lab == j:
            return i
        return lab - 1 if lab > j else lab

    out = []
    for s in sides:
        mk = tuple(Marker(relabel(m.label), m.direction) for m in s.markers)
        lab = relabel(s.label) if s.label is not None else None
        out.append(replace(s, label=lab, markers=mk))
    _check_polygon(out, relaxed)
    cut = Cut("node_smoothing", v, vertex, n, glue, ((c, v), (v, c)))
    log.debug("node smoothing at node %d: corner %s apex %s", vertex, c, v)
    return replace(b, sides=tuple(out), ncomponents=nc - 1, cuts=b.cuts + (cut,))


# --- recipes ------------------------------------------------------------------------


class RecipeError(ValueError):
    pass


def base_from_recipe(recipe: dict, relaxed: Optional[bool] = None) -> AlmostToricBase:
    """Build the toric polygon of a recipe and apply its surgeries in order."""
    try:
        cycle = [int(x) for x in recipe["toric_cycle"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise RecipeError("recipe needs an integer list 'toric_cycle'") from exc
    rays = fan_from_toric_cycle(cycle)
    lengths = recipe.get("lengths")
    if isinstance(lengths, dict):
        if "support" not in lengths:
            raise RecipeError("'lengths' object needs a 'support' list")
        ls = solve_lengths(rays, lengths["support"])
        scale = int(lengths.get("scale", 1))
        ls = [m * scale for m in ls]
    elif isinstance(lengths, list):
        ls = [int(m) for m in lengths]
    else:
        raise RecipeError("recipe needs 'lengths' as a list or {'support': [...]}")
    if relaxed is None:
        relaxed = bool(recipe.get("relaxed_cuts", False))
    b = replace(moment_polygon(rays, ls), relaxed=relaxed)
    for step, op in enumerate(recipe.get("surgeries", [])):
        kind = op.get("op")
        try:
            if kind == "blowup":
                off = op.get("offset")
                b = internal_blowup(b, int(op["edge"]), int(op.get("size", 1)),
                                    None if off is None else int(off), int(op.get("shear", 0)))
            elif kind == "smooth":
                b = node_smoothing(b, int(op["vertex"]), int(op.get("n", 1)))
            else:
                raise RecipeError(f"surgery {step}: unknown op {kind!r}")
        except KeyError as exc:
            raise RecipeError(f"surgery {step}: missing field {exc}") from exc
        except SurgeryError as exc:
            name = "internal_blowup" if kind == "blowup" else "node_smoothing"
            raise type(exc)(f"surgery {step} ({name}): {exc}") from exc
    return b


def recipe_cycle_surgeries(recipe: dict) -> list:
    """Cycle-level surgeries of a recipe (blow-ups are internal)."""
    from .cycles import SurgeryOnCycle

    out = []
    for op in recipe.get("surgeries", []):
        if op["op"] == "blowup":
            out.append(SurgeryOnCycle("internal_blowup", int(op["edge"])))
        else:
            out.append(SurgeryOnCycle("node_smoothing", int(op["vertex"])))
    return out
