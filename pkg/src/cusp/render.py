"""Deterministic SVG pictures of bases and closed surfaces.

Element order follows the data (sides, then cuts, then points) so the output
is stable and diffable.  Coordinates are printed with three decimals.
"""

from __future__ import annotations

from typing import Optional

from .compactify import ClosedSurface
from .surgery import AlmostToricBase
from .tricomplex import TriComplex

PANEL = 420.0
MARGIN = 20.0


class _Frame:
    """Affine map from lattice coordinates to one panel (y axis flipped)."""

    def __init__(self, points, dx: float = 0.0):
        xs = [float(p[0]) for p in points]
        ys = [float(p[1]) for p in points]
        self.x0, self.y1 = min(xs), max(ys)
        span = max(max(xs) - self.x0, self.y1 - min(ys), 1.0)
        self.k = (PANEL - 2 * MARGIN) / span
        self.dx = dx

    def __call__(self, p) -> str:
        x = self.dx + MARGIN + (float(p[0]) - self.x0) * self.k
        y = MARGIN + (self.y1 - float(p[1])) * self.k
        return f"{x:.3f},{y:.3f}"


def _line(fr, p, q, cls) -> str:
    (x1, y1), (x2, y2) = fr(p).split(","), fr(q).split(",")
    return f'<line class="{cls}" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"/>'


def _dot(fr, p, cls, r=3.5) -> str:
    x, y = fr(p).split(",")
    return f'<circle class="{cls}" cx="{x}" cy="{y}" r="{r}"/>'


def _grid(fr, points) -> list:
    xs = [int(float(p[0]) // 1) for p in points]
    ys = [int(float(p[1]) // 1) for p in points]
    out = []
    for x in range(min(xs), max(xs) + 2):
        for y in range(min(ys), max(ys) + 2):
            out.append(_dot(fr, (x, y), "grid", 0.8))
    return out


STYLE = ("<style>"
         ".free{stroke:#000;stroke-width:2}"
         ".glued{stroke:#777;stroke-width:1.2}"
         ".cut{stroke:#c00;stroke-width:1.2;stroke-dasharray:4 3}"
         ".tri{stroke:#9ab;stroke-width:0.5}"
         ".sing{fill:#c00}.v0{fill:#06c}.collapsed{fill:#080}.grid{fill:#bbb}"
         "</style>")


def _document(width: float, body: list) -> str:
    head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" '
            f'height="{PANEL:.0f}" viewBox="0 0 {width:.0f} {PANEL:.0f}">')
    return "\n".join([head, STYLE] + body + ["</svg>"]) + "\n"


def render_base(b: AlmostToricBase, grid: bool = False) -> str:
    """The base polygon: free sides solid, glued sides thin, cuts dashed, singular points red."""
    pts = [s.start for s in b.sides]
    fr = _Frame(pts)
    body = _grid(fr, pts) if grid else []
    for s in b.sides:
        body.append(_line(fr, s.start, s.end, "free" if s.free else "glued"))
    for c in b.cuts:
        for p, q in c.banks:
            body.append(_line(fr, p, q, "cut"))
    for p in b.singular_points:
        body.append(_dot(fr, p, "sing"))
    for p in b.collapsed:
        body.append(_dot(fr, p, "collapsed"))
    return _document(PANEL, body)


def render_surface(s: ClosedSurface, t: Optional[TriComplex] = None, grid: bool = False) -> str:
    """One panel per fundamental domain, with the triangulation if given."""
    body = []
    for k, piece in enumerate(s.pieces):
        fr = _Frame(piece.vertices, dx=k * PANEL)
        if grid:
            body += _grid(fr, piece.vertices)
        if t is not None and t.charts is not None:
            for f, ch in enumerate(t.charts):
                if t.face_piece is not None and t.face_piece[f] != k:
                    continue
                for i in range(3):
                    body.append(_line(fr, ch[i], ch[(i + 1) % 3], "tri"))
        n = len(piece.vertices)
        for i, ps in enumerate(piece.sides):
            p, q = piece.vertices[i], piece.vertices[(i + 1) % n]
            body.append(_line(fr, p, q, "glued" if ps is not None else "free"))
        for pi, p in s.singular:
            if pi == k:
                body.append(_dot(fr, p, "sing"))
        if s.v0[0] == k:
            body.append(_dot(fr, s.v0[1], "v0", 5))
    return _document(PANEL * len(s.pieces), body)
