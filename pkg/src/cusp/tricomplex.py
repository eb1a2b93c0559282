"""Unimodular triangulations of closed integral-affine surfaces and their stars.

A :class:`TriComplex` is stored with half-edges: half-edge ``h = 3 f + i``
runs from corner ``i`` to corner ``i + 1`` of face ``f``.  Every face keeps
its own integral chart (the coordinates of its corners), and
``transition[h]`` carries the chart of the face across ``h`` into the chart
of ``h``'s face.  The self-intersection number of a directed edge
``a -> b`` with opposite corners ``c`` and ``j`` is the integer ``d`` with
``(c - a) + (j - a) = d (b - a)``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .compactify import ClosedSurface
from .cycles import (
    Cycle,
    SurgeryOnCycle,
    charge,
    cycles_equal,
    dual_monodromy,
    is_negative_definite,
    monodromy,
    same_cyclic_word,
    sl2z_word,
)
from .exactgeom import (
    AffineMap,
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
    segment_lattice_points,
    segments_cross,
)

log = logging.getLogger(__name__)


class TriangulationError(Exception):
    pass


class NonIntegralInput(TriangulationError):
    pass


# --- planar triangulation ------------------------------------------------------------


def ear_clip(vertices: Sequence) -> list:
    """Triangulate a (weakly) simple counterclockwise polygon into corner triples.

    Repeated positions are allowed where the polygon runs along a slit and
    back; a point at the same position as a corner of the candidate ear is
    not counted as lying inside it.
    """
    pts = [Vec2(*v) for v in vertices]
    idx = list(range(len(pts)))
    sides = [(pts[i], pts[(i + 1) % len(pts)]) for i in range(len(pts))]
    tris = []
    guard = 0
    while len(idx) > 3:
        m = len(idx)
        for k in range(m):
            ip, ix, inx = idx[k - 1], idx[k], idx[(k + 1) % m]
            p, x, q = pts[ip], pts[ix], pts[inx]
            if orient(p, x, q) <= 0:
                continue
            corners = {p, x, q}
            if any(point_in_polygon(pts[j], [p, x, q]) >= 0 and pts[j] not in corners
                   for j in idx):
                continue
            if any(segments_cross(p, q, a, b) for a, b in sides):
                continue
            if any(on_segment(a, p, q) and a not in corners for a, _ in sides):
                continue
            tris.append((ip, ix, inx))
            idx.pop(k)
            break
        else:
            raise TriangulationError("no ear found; polygon is not simple")
        guard += 1
    if orient(*(pts[i] for i in idx)) <= 0:
        raise TriangulationError("degenerate final triangle")
    tris.append(tuple(idx))
    total = sum(polygon_area2([pts[i] for i in t]) for t in tris)
    if total != polygon_area2(pts):
        raise TriangulationError("ear clipping lost area")
    return [tuple(pts[i] for i in t) for t in tris]


def _interior_point(a: Vec2, b: Vec2, c: Vec2) -> Vec2:
    """A lattice point strictly inside a triangle with primitive edges and twice-area > 1."""
    u = b - a
    w = complete_basis(u)
    # coordinates in the basis (u, w): a -> 0, b -> (1, 0), c -> (p, q)
    cc = c - a
    q = det2(u, cc)
    p = det2(cc, w)
    # y = -p^-1 mod q gives x = (p y + 1) / q strictly between the two slanted sides
    y = (-pow(p, -1, q)) % q
    x = (p * y + 1) // q
    pt = a + u * x + w * y
    assert point_in_polygon(pt, [a, b, c]) == 1
    return pt


def unimodular_refinement(tri) -> list:
    """Split a lattice triangle into twice-area-1 triangles using all its lattice points."""
    out = []
    stack = [tuple(Vec2(*v) for v in tri)]
    while stack:
        a, b, c = stack.pop()
        area = polygon_area2([a, b, c])
        if area <= 0:
            raise TriangulationError("degenerate triangle")
        split = None
        for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
            g = lattice_length(y - x)
            if g > 1:
                split = (x, y, z, x + primitive(y - x))
                break
        if split is not None:
            x, y, z, m = split
            stack.append((m, y, z))
            stack.append((x, m, z))
            continue
        if area == 1:
            out.append((a, b, c))
            continue
        p = _interior_point(a, b, c)
        stack.extend([(b, c, p), (c, a, p), (a, b, p)])
    return out


# --- the complex ------------------------------------------------------------------------


@dataclass
class TriComplex:
    faces: list                    # (v_a, v_b, v_c) global vertex ids, counterclockwise
    twin: list                     # half-edge -> opposite half-edge
    d: list                        # half-edge -> self-intersection number
    charts: Optional[list] = None  # face -> corner coordinates
    transition: Optional[list] = None  # half-edge -> AffineMap (twin chart -> this chart)
    face_piece: Optional[list] = None
    vertices: list = field(default_factory=list)  # dicts: piece, pos, kind
    v0: Optional[int] = None

    @property
    def nvertices(self) -> int:
        return len(self.vertices) if self.vertices else 1 + max(max(f) for f in self.faces)

    def copy(self) -> "TriComplex":
        return TriComplex(list(self.faces), list(self.twin), list(self.d),
                          list(self.charts) if self.charts is not None else None,
                          list(self.transition) if self.transition is not None else None,
                          list(self.face_piece) if self.face_piece is not None else None,
                          [dict(v) for v in self.vertices], self.v0)

    def origin(self, h: int) -> int:
        return self.faces[h // 3][h % 3]

    def target(self, h: int) -> int:
        return self.faces[h // 3][(h + 1) % 3]

    def corners_of(self) -> dict:
        out = {}
        for f, face in enumerate(self.faces):
            for i, v in enumerate(face):
                out.setdefault(v, []).append(3 * f + i)
        return out

    def next_out(self, h: int) -> int:
        """The half-edge leaving ``origin(h)`` next in counterclockwise order."""
        f, i = divmod(h, 3)
        return self.twin[3 * f + (i + 2) % 3]

    def outgoing(self, v: int, start: Optional[int] = None) -> list:
        """Half-edges leaving ``v`` in counterclockwise order."""
        if start is None:
            start = self.corners_of()[v][0]
        out = [start]
        h = self.next_out(start)
        while h != start:
            out.append(h)
            h = self.next_out(h)
            if len(out) > 3 * len(self.faces):
                raise TriangulationError(f"link of vertex {v} does not close")
        return out

    def compute_d(self, h: int) -> int:
        f, i = divmod(h, 3)
        a, b, c = (self.charts[f][(i + k) % 3] for k in range(3))
        t = self.twin[h]
        g, j = divmod(t, 3)
        tr = self.transition[h]
        if tr(self.charts[g][(j + 1) % 3]) != a or tr(self.charts[g][j]) != b:
            raise TriangulationError(f"transition of half-edge {h} does not match its edge")
        J = tr(self.charts[g][(j + 2) % 3])
        s = (c - a) + (J - a)
        e = b - a
        if det2(s, e) != 0:
            raise TriangulationError(f"half-edge {h}: opposite corners are not balanced")
        k = Fraction(s[0], e[0]) if e[0] != 0 else Fraction(s[1], e[1])
        if k.denominator != 1:
            raise TriangulationError(f"half-edge {h}: non-integral self-intersection")
        return int(k)

    def recompute_d(self) -> "TriComplex":
        self.d = [self.compute_d(h) for h in range(3 * len(self.faces))]
        return self


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        self.parent.setdefault(x, x)
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # keep the smaller key as root so results do not depend on call order
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


def triangulate(s: ClosedSurface) -> TriComplex:
    """Unimodular triangulation of every piece, glued along the piece sides."""
    faces_pos = []   # (piece, (a, b, c))
    for pi, piece in enumerate(s.pieces):
        verts = [Vec2(*v) for v in piece.vertices]
        if not all(v.is_integral() for v in verts):
            raise NonIntegralInput(f"piece {piece.name} has non-integral vertices")
        verts = [v.to_int() for v in verts]
        for tri in ear_clip(verts):
            for small in unimodular_refinement(tri):
                faces_pos.append((pi, small))
    # directed unit segments lying on glued piece sides
    on_side = {}
    for pi, piece in enumerate(s.pieces):
        n = len(piece.vertices)
        for si, ps in enumerate(piece.sides):
            a, b = Vec2(*piece.vertices[si]), Vec2(*piece.vertices[(si + 1) % n])
            pts = segment_lattice_points(a, b)
            for x, y in zip(pts, pts[1:]):
                on_side[(pi, x, y)] = ps
    by_key = {}
    for f, (pi, tri) in enumerate(faces_pos):
        for i in range(3):
            by_key[(pi, tri[i], tri[(i + 1) % 3])] = 3 * f + i
    nh = 3 * len(faces_pos)
    twin = [None] * nh
    transition = [None] * nh
    for f, (pi, tri) in enumerate(faces_pos):
        for i in range(3):
            h = 3 * f + i
            a, b = tri[i], tri[(i + 1) % 3]
            ps = on_side.get((pi, a, b), "interior")
            if ps == "interior":
                key, g = (pi, b, a), AffineMap.identity()
            elif ps is None:
                raise TriangulationError("surface has a free side; it is not closed")
            else:
                g = ps.gluing
                inv = g.inverse()
                key = (ps.partner[0], inv(b), inv(a))
            t = by_key.get(key)
            if t is None:
                raise TriangulationError(f"no neighbour across {tuple(a)}->{tuple(b)} in piece {pi}")
            twin[h], transition[h] = t, g
    for h in range(nh):
        if twin[twin[h]] != h:
            raise TriangulationError("half-edge pairing is not an involution")
    uf = _UnionFind()
    for f, (pi, tri) in enumerate(faces_pos):
        for i in range(3):
            h = 3 * f + i
            g, j = divmod(twin[h], 3)
            gp, gtri = faces_pos[g]
            uf.union((pi, tuple(tri[i])), (gp, tuple(gtri[(j + 1) % 3])))
    ids, vertices, faces = {}, [], []
    for pi, tri in faces_pos:
        row = []
        for p in tri:
            r = uf.find((pi, tuple(p)))
            if r not in ids:
                ids[r] = len(vertices)
                vertices.append({"piece": r[0], "pos": Vec2(*r[1]), "kind": "regular"})
            row.append(ids[r])
        faces.append(tuple(row))

    def vid(piece, pos):
        key = uf.find((piece, tuple(Vec2(*pos))))
        if key not in ids:
            raise TriangulationError(f"point {tuple(pos)} of piece {piece} is not a vertex")
        return ids[key]

    for piece, pos in s.singular:
        vertices[vid(piece, pos)]["kind"] = "singular"
    v0 = vid(*s.v0)
    vertices[v0]["kind"] = "v0"
    t = TriComplex(faces, twin, [0] * nh, [tri for _, tri in faces_pos], transition,
                   [pi for pi, _ in faces_pos], vertices, v0)
    for f, ch in enumerate(t.charts):
        if polygon_area2(ch) != 1:
            raise TriangulationError(f"face {f} is not unimodular")
    log.info("triangulated: %d faces, %d vertices", len(faces), len(vertices))
    return edge_d_values(t)


def edge_d_values(t: TriComplex) -> TriComplex:
    """Annotate every half-edge with its self-intersection number."""
    if t.charts is None or t.transition is None:
        raise TriangulationError("complex carries no charts")
    return t.recompute_d()


# --- stars ----------------------------------------------------------------------


@dataclass(frozen=True)
class Star:
    center: int
    cycle: Cycle
    charge: int
    local_monodromy: Mat2   # product of [[0, 1], [-1, d_i]] over the cycle
    holonomy: Optional[Mat2] = None  # linear holonomy of the charts around the vertex


def star(t: TriComplex, v: int, start: Optional[int] = None) -> Star:
    """Self-intersections of the edges leaving ``v``, counterclockwise."""
    hs = t.outgoing(v, start)
    cyc = Cycle(t.d[h] for h in hs)
    hol = None
    if t.charts is not None and t.transition is not None:
        acc = AffineMap.identity()
        h0 = hs[0]
        f0, i0 = divmod(h0, 3)
        p0 = t.charts[f0][i0]
        for h in hs:
            f, i = divmod(h, 3)
            e = 3 * f + (i + 2) % 3  # crossing into the next face counterclockwise
            acc = acc @ t.transition[e]
        assert acc(p0) == p0
        hol = acc.linear
    return Star(v, cyc, charge(cyc), monodromy(cyc), hol)


def all_stars(t: TriComplex) -> list:
    corners = t.corners_of()
    return [star(t, v, corners[v][0]) for v in sorted(corners)]


# --- flips at v0 -----------------------------------------------------------------


def _flip(t: TriComplex, h: int):
    """Flip the edge of half-edge ``h`` whose two faces form a unit parallelogram."""
    f, i = divmod(h, 3)
    tw = t.twin[h]
    g, j = divmod(tw, 3)
    if f == g:
        raise TriangulationError("cannot flip an edge bounding one face twice")
    a_id, b_id, c_id = (t.faces[f][(i + k) % 3] for k in range(3))
    j_id = t.faces[g][(j + 2) % 3]
    a, b, c = (t.charts[f][(i + k) % 3] for k in range(3))
    gmap = t.transition[h]            # chart of g -> chart of f
    J = gmap(t.charts[g][(j + 2) % 3])
    if J != a + b - c:
        raise TriangulationError("faces across the edge do not form a parallelogram")
    # outer half-edges: from f: b->c, c->a ; from g: a->j, j->b
    hf_bc, hf_ca = 3 * f + (i + 1) % 3, 3 * f + (i + 2) % 3
    hg_aj, hg_jb = 3 * g + (j + 1) % 3, 3 * g + (j + 2) % 3
    outer = {
        # new half-edge id: (old half-edge, chart correction)
        3 * f + 0: (hg_aj, gmap),      # a -> j
        3 * f + 2: (hf_ca, None),      # c -> a
        3 * g + 0: (hg_jb, gmap),      # j -> b
        3 * g + 1: (hf_bc, None),      # b -> c
    }
    old_twin = {new: t.twin[old] for new, (old, _) in outer.items()}
    old_tr = {new: t.transition[old] for new, (old, _) in outer.items()}
    old_d = {new: t.d[old] for new, (old, _) in outer.items()}
    t.faces[f] = (a_id, j_id, c_id)
    t.faces[g] = (j_id, b_id, c_id)
    t.charts[f] = (a, J, c)
    t.charts[g] = (J, b, c)
    if t.face_piece is not None:
        t.face_piece[g] = t.face_piece[f]
    # new diagonal j -> c (in f) and c -> j (in g), same chart
    t.twin[3 * f + 1], t.twin[3 * g + 2] = 3 * g + 2, 3 * f + 1
    t.transition[3 * f + 1] = t.transition[3 * g + 2] = AffineMap.identity()
    for new, (old, corr) in outer.items():
        ot = old_twin[new]
        # the outer twin may itself be one of the moved half-edges
        for n2, (o2, _) in outer.items():
            if o2 == ot:
                ot = n2
                break
        tr = old_tr[new]
        if corr is not None:
            tr = corr @ tr
        t.twin[new] = ot
        t.twin[ot] = new
        t.transition[new] = tr
        t.transition[ot] = tr.inverse()
        t.d[new] = old_d[new]
    touched = set()
    for hh in (3 * f, 3 * f + 1, 3 * f + 2, 3 * g, 3 * g + 1, 3 * g + 2):
        touched.add(hh)
        touched.add(t.twin[hh])
    for hh in touched:
        t.d[hh] = t.compute_d(hh)
    return 3 * f  # a -> j, still leaving the flipped vertex


def minimize_star(t: TriComplex, v0: Optional[int] = None) -> TriComplex:
    """Flip edges at ``v0`` with self-intersection 1 until none is left."""
    t = t.copy()
    v0 = t.v0 if v0 is None else v0
    flips = 0
    start = t.corners_of()[v0][0]
    while True:
        hs = t.outgoing(v0, start)
        cand = [h for h in hs if t.d[h] == 1]
        if not cand or len(hs) <= 2:
            break
        start = _flip(t, cand[0])
        flips += 1
        if flips > 3 * len(t.faces):
            raise TriangulationError("flip rewrite does not terminate")
    log.info("minimize_star: %d flips, %d edges at v0", flips, len(t.outgoing(v0, start)))
    return t


# --- expected stars at surgery points ---------------------------------------------


def expected_star_cycle(toric_star: Sequence[int], incident: Sequence[SurgeryOnCycle]) -> Cycle:
    """Star cycle after the pseudo-fan surgeries matching base surgeries at a point.

    A base blow-up merges the star edges ``i`` and ``i + 1`` (a node smoothing
    of the pseudo-fan); a base node smoothing raises star edge ``i`` by one.
    Indices refer to the edges of the pre-surgery star.
    """
    entries = [[d, [k]] for k, d in enumerate(toric_star)]
    n0 = len(entries)

    def where(k):
        if not 0 <= k < n0:
            raise IndexError(f"star edge {k} out of range")
        for pos, (_, ks) in enumerate(entries):
            if k in ks:
                return pos
        raise IndexError(f"star edge {k} no longer exists")  # pragma: no cover

    for s in incident:
        pos = where(s.index)
        if s.kind == "internal_blowup":
            # base blow-up -> node smoothing on the star
            nxt = (pos + 1) % len(entries)
            if nxt == pos:
                raise ValueError("cannot merge the only edge of a star")
            d = entries[pos][0] + entries[nxt][0] - 2
            merged = [d, entries[pos][1] + entries[nxt][1]]
            if nxt == 0:
                entries = [merged] + entries[1:pos]
            else:
                entries = entries[:pos] + [merged] + entries[nxt + 1:]
        elif s.kind == "node_smoothing":
            entries[pos][0] += 1
        else:
            raise ValueError(f"unsupported incident surgery {s.kind}")
    return Cycle(d for d, _ in entries)


def _angle_key(v):
    upper = v[1] > 0 or (v[1] == 0 and v[0] > 0)
    return 0 if upper else 1


def _sort_ccw(vecs):
    from functools import cmp_to_key

    def cmp(u, w):
        hu, hw = _angle_key(u), _angle_key(w)
        if hu != hw:
            return hu - hw
        c = det2(u, w)
        return -1 if c > 0 else (1 if c < 0 else 0)

    return sorted(vecs, key=cmp_to_key(cmp))


def planar_star(directions) -> tuple:
    """Star cycle of a complete unimodular planar fan given its edge directions."""
    ws = _sort_ccw(list({Vec2(*primitive(w)) for w in directions}))
    n = len(ws)
    if n < 3:
        raise TriangulationError("planar star needs at least three edges")
    out = []
    for i in range(n):
        prev, cur, nxt = ws[i - 1], ws[i], ws[(i + 1) % n]
        if det2(cur, nxt) != 1:
            raise TriangulationError("planar star is not a complete unimodular fan")
        s = prev + nxt
        out.append(int(Fraction(s[0], cur[0]) if cur[0] else Fraction(s[1], cur[1])))
    return ws, tuple(out)


def toric_star_at(t: TriComplex, piece: int, point, cuts) -> tuple:
    """Pre-surgery star of a surgery point and the surgeries incident to it.

    The planar neighbours of ``point`` inside ``piece`` are collected and the
    wedge of every triangle removed at this apex is filled back in.  Returns
    ``(cycle, incident)`` with indices into the returned cycle.
    """
    point = Vec2(*point)
    dirs = []
    for f, ch in enumerate(t.charts):
        if t.face_piece[f] != piece:
            continue
        for i in range(3):
            if ch[i] == point:
                dirs += [ch[(i + 1) % 3] - point, ch[(i + 2) % 3] - point]
    mine = [c for c in cuts if c.apex == point]
    for c in mine:
        if c.kind == "internal_blowup":
            (b1, _), (_, b2) = c.banks
            dirs += [b1 - point, b2 - point]
    ws, cyc = planar_star(dirs)
    incident = []
    for c in mine:
        if c.kind == "internal_blowup":
            (b1, _), _ = c.banks
            incident.append(SurgeryOnCycle("internal_blowup", ws.index(primitive(b1 - point))))
        else:
            (cpt, _), _ = c.banks
            incident.append(SurgeryOnCycle("node_smoothing", ws.index(primitive(cpt - point))))
    return Cycle(cyc), incident


# --- verification --------------------------------------------------------------


@dataclass
class TypeIIIReport:
    stars: list
    triple_point_ok: bool
    charts_ok: Optional[bool]
    sphere_ok: bool
    euler: int
    counts: dict
    charge_total: int
    v0: Optional[int]
    v0_cycle: Optional[Cycle]
    v0_negative_definite: bool
    v0_matches_dual: bool
    v0_monodromy_word: Optional[str]
    dual_word: Optional[str]
    v0_word_ok: bool
    v0_word_orientation: Optional[str]
    expected_dual: Optional[Cycle]
    problems: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (self.triple_point_ok and self.charts_ok is not False and self.sphere_ok
                and self.charge_total == 24 and self.v0_negative_definite
                and self.v0_matches_dual and self.v0_word_ok)

    def to_json(self) -> dict:
        def cyc(c):
            return None if c is None else list(c)

        return {
            "ok": self.ok,
            "checks": {
                "triple_point_ok": self.triple_point_ok,
                "charts_ok": self.charts_ok,
                "sphere_ok": self.sphere_ok,
                "charge_total": self.charge_total,
                "charge_total_ok": self.charge_total == 24,
                "v0_negative_definite": self.v0_negative_definite,
                "v0_matches_dual": self.v0_matches_dual,
                "v0_word_ok": self.v0_word_ok,
            },
            "euler_characteristic": self.euler,
            "counts": self.counts,
            "v0": self.v0,
            "v0_cycle": cyc(self.v0_cycle),
            "v0_cycle_contracted": cyc(contract_star(self.v0_cycle)) if self.v0_cycle else None,
            "v0_charge": charge(self.v0_cycle) if self.v0_cycle else None,
            "expected_dual": cyc(self.expected_dual),
            "v0_monodromy_word": self.v0_monodromy_word,
            "dual_word": self.dual_word,
            "v0_word_orientation": self.v0_word_orientation,
            "charges": {str(s.center): s.charge for s in self.stars if s.charge != 0},
            "stars": [{"vertex": s.center, "cycle": list(s.cycle), "charge": s.charge}
                      for s in self.stars],
            "problems": self.problems,
        }


def contract_star(c: Sequence[int]) -> Cycle:
    """Read a two-edge star ``(a, 1)`` as the one-component cycle ``(a - 2)``.

    A vertex always has at least two outgoing edges, so a nodal boundary
    curve shows up with an extra edge of self-intersection 1; contracting it
    keeps the charge and the monodromy trace.
    """
    c = Cycle(c)
    if len(c) == 2 and 1 in c:
        other = c[1] if c[0] == 1 else c[0]
        return Cycle([other - 2])
    return c


def _sphere_check(t: TriComplex, problems: list) -> tuple:
    nh = 3 * len(t.faces)
    ok = True
    for h in range(nh):
        tw = t.twin[h]
        if not 0 <= tw < nh or t.twin[tw] != h or tw == h:
            problems.append(f"half-edge {h}: twin pairing broken")
            return False, None
        if t.origin(tw) != t.target(h) or t.target(tw) != t.origin(h):
            problems.append(f"half-edge {h}: twin has mismatched ends")
            return False, None
    corners = t.corners_of()
    for v, cs in corners.items():
        try:
            ring = t.outgoing(v, cs[0])
        except TriangulationError as exc:
            problems.append(str(exc))
            return False, None
        if len(ring) != len(cs):
            problems.append(f"vertex {v}: link is not a single cycle")
            ok = False
    nv = len(corners)
    if t.vertices and nv != len(t.vertices):
        problems.append("some listed vertices lie on no face")
        ok = False
    # connectivity over face adjacency
    seen = {0}
    stack = [0]
    while stack:
        f = stack.pop()
        for i in range(3):
            g = t.twin[3 * f + i] // 3
            if g not in seen:
                seen.add(g)
                stack.append(g)
    if len(seen) != len(t.faces):
        problems.append("complex is not connected")
        ok = False
    euler = nv - nh // 2 + len(t.faces)
    if euler != 2:
        problems.append(f"Euler characteristic {euler} != 2")
        ok = False
    return ok, euler


def verify_type_iii(t: TriComplex, expected_dual: Optional[Sequence[int]] = None,
                    v0: Optional[int] = None) -> TypeIIIReport:
    """Check the triple point formula, sphere topology, charge 24 and the star at v0."""
    problems = []
    v0 = t.v0 if v0 is None else v0
    nh = 3 * len(t.faces)
    triple_ok = True
    for h in range(nh):
        if t.d[h] + t.d[t.twin[h]] != 2:
            triple_ok = False
            problems.append(f"half-edges {h}/{t.twin[h]}: d sum {t.d[h] + t.d[t.twin[h]]} != 2")
            break
    charts_ok = None
    if t.charts is not None and t.transition is not None:
        charts_ok = True
        for f, ch in enumerate(t.charts):
            if polygon_area2(ch) != 1:
                charts_ok = False
                problems.append(f"face {f} is not unimodular in its chart")
                break
        if charts_ok:
            for h in range(nh):
                try:
                    if t.compute_d(h) != t.d[h]:
                        charts_ok = False
                        problems.append(f"half-edge {h}: stored d differs from its charts")
                        break
                except TriangulationError as exc:
                    charts_ok = False
                    problems.append(str(exc))
                    break
    sphere_ok, euler = _sphere_check(t, problems)
    stars = all_stars(t) if sphere_ok else []
    total = sum(s.charge for s in stars)
    v0_cycle = None
    nd = matches = word_ok = False
    w_v0 = w_dual = orientation = None
    exp = Cycle(expected_dual) if expected_dual is not None else None
    by_center = {st.center: st for st in stars}
    if sphere_ok and v0 is not None and v0 not in by_center:
        problems.append(f"v0 = {v0} lies on no face")
    elif sphere_ok and v0 is not None:
        s0 = by_center[v0]
        v0_cycle = s0.cycle
        reduced = contract_star(v0_cycle)
        nd = is_negative_definite(reduced)
        matches = exp is not None and cycles_equal(reduced, exp)
        if nd and s0.holonomy is not None:
            w_v0 = sl2z_word(s0.holonomy)
            # the product is read in the counterclockwise order of the star
            w_dual = sl2z_word(dual_monodromy(v0_cycle))
            if same_cyclic_word(w_v0, w_dual):
                word_ok, orientation = True, "same"
            else:
                flipped = w_v0.translate(str.maketrans("RL", "LR"))[::-1]
                if same_cyclic_word(flipped, w_dual):
                    orientation = "reversed"
                problems.append("v0 holonomy is not SL(2,Z)-conjugate to the dual product")
    if sphere_ok and total != 24:
        problems.append(f"charges sum to {total}, not 24")
    counts = {"vertices": len(t.corners_of()), "edges": nh // 2, "faces": len(t.faces),
              "edges_at_v0": len(v0_cycle) if v0_cycle else None}
    return TypeIIIReport(stars, triple_ok, charts_ok, sphere_ok, euler, counts, total, v0,
                         v0_cycle, nd, matches, w_v0, w_dual, word_ok, orientation, exp,
                         problems)
