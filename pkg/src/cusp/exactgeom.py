"""Exact planar lattice geometry.

Everything here works over Python integers and :class:`fractions.Fraction`;
no floating point value ever enters a predicate.  Twice-areas are used
throughout so that a basis triangle has twice-area 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, NamedTuple, Sequence, Union

Rat = Fraction
Number = Union[int, Fraction]


def as_rat(x) -> Fraction:
    """Coerce an int, Fraction, ``"p/q"`` string or ``[p, q]`` pair."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (list, tuple)):
        return Fraction(int(x[0]), int(x[1]))
    return Fraction(x)


def _norm(x: Number) -> Number:
    # integral fractions collapse to int so that hashing and printing stay uniform
    if type(x) is int:
        return x
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


class Vec2(NamedTuple):
    x: Number
    y: Number

    def __add__(self, other):  # type: ignore[override]
        return Vec2(_norm(self.x + other[0]), _norm(self.y + other[1]))

    def __sub__(self, other):
        return Vec2(_norm(self.x - other[0]), _norm(self.y - other[1]))

    def __neg__(self):
        return Vec2(-self.x, -self.y)

    def __mul__(self, k):  # type: ignore[override]
        return Vec2(_norm(self.x * k), _norm(self.y * k))

    __rmul__ = __mul__

    def is_integral(self) -> bool:
        return all(isinstance(c, int) or c.denominator == 1 for c in self)

    def to_int(self) -> "Vec2":
        if not self.is_integral():
            raise ValueError(f"{self} is not a lattice point")
        return Vec2(int(self.x), int(self.y))


class Mat2(NamedTuple):
    """Row-major 2x2 integer matrix ``[[a, b], [c, d]]``."""

    a: int
    b: int
    c: int
    d: int

    @classmethod
    def identity(cls) -> "Mat2":
        return cls(1, 0, 0, 1)

    @classmethod
    def from_rows(cls, rows) -> "Mat2":
        (a, b), (c, d) = rows
        return cls(int(a), int(b), int(c), int(d))

    @classmethod
    def from_columns(cls, u, v) -> "Mat2":
        return cls(u[0], v[0], u[1], v[1])

    def rows(self):
        return [[self.a, self.b], [self.c, self.d]]

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    @property
    def trace(self) -> int:
        return self.a + self.d

    def __matmul__(self, other):
        if isinstance(other, Mat2):
            a, b, c, d = self
            e, f, g, h = other
            return Mat2(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)
        x, y = other
        return Vec2(_norm(self.a * x + self.b * y), _norm(self.c * x + self.d * y))

    def inverse(self) -> "Mat2":
        if self.det != 1:
            raise ValueError(f"matrix {self.rows()} is not in SL(2,Z)")
        return Mat2(self.d, -self.b, -self.c, self.a)

    def transpose(self) -> "Mat2":
        return Mat2(self.a, self.c, self.b, self.d)


@dataclass(frozen=True)
class AffineMap:
    """``v -> linear @ v + translation`` with ``linear`` in SL(2,Z)."""

    linear: Mat2
    translation: Vec2 = Vec2(0, 0)

    def __post_init__(self):
        if self.linear.det != 1:
            raise ValueError(f"linear part {self.linear.rows()} has det {self.linear.det}")
        object.__setattr__(self, "translation", Vec2(*map(_norm, self.translation)))

    @classmethod
    def identity(cls) -> "AffineMap":
        return cls(Mat2.identity(), Vec2(0, 0))

    @classmethod
    def fixing(cls, point, linear: Mat2) -> "AffineMap":
        """The affine map with linear part ``linear`` fixing ``point``."""
        p = Vec2(*point)
        return cls(linear, p - linear @ p)

    def __call__(self, v) -> Vec2:
        return (self.linear @ v) + self.translation

    def __matmul__(self, other: "AffineMap") -> "AffineMap":
        # (self @ other)(v) == self(other(v))
        return AffineMap(self.linear @ other.linear, self(other.translation))

    def inverse(self) -> "AffineMap":
        inv = self.linear.inverse()
        return AffineMap(inv, -(inv @ self.translation))

    def scaled(self, k: int) -> "AffineMap":
        """Conjugate by multiplication with ``k`` (order-k refinement)."""
        return AffineMap(self.linear, self.translation * k)

    def is_identity(self) -> bool:
        return self.linear == Mat2.identity() and self.translation == Vec2(0, 0)


def det2(u, v) -> Number:
    return _norm(u[0] * v[1] - u[1] * v[0])


def dot2(u, v) -> Number:
    return _norm(u[0] * v[0] + u[1] * v[1])


def mat_product(ms: Iterable[Mat2]) -> Mat2:
    """Left-to-right product; the empty product is the identity."""
    out = Mat2.identity()
    for m in ms:
        out = out @ m
    return out


def lattice_length(v) -> int:
    """Lattice length of an integral vector (0 for the zero vector)."""
    return gcd(int(v[0]), int(v[1]))


def primitive(v) -> Vec2:
    g = lattice_length(v)
    if g == 0:
        raise ValueError("zero vector has no primitive direction")
    return Vec2(int(v[0]) // g, int(v[1]) // g)


def rot90(v) -> Vec2:
    """Rotate counterclockwise by a quarter turn."""
    return Vec2(-v[1], v[0])


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b) if a and b else 0


def complete_basis(u) -> Vec2:
    """Some ``w`` with ``det2(u, w) == 1`` for a primitive integral ``u``."""
    a, b = int(u[0]), int(u[1])
    # extended gcd: s*a + t*b == 1, then det((a,b),(-t,s)) = a*s + b*t = 1
    old_r, r, old_s, s, old_t, t = a, b, 1, 0, 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    if old_r != 1:
        raise ValueError(f"{u} is not primitive")
    return Vec2(-old_t, old_s)


@dataclass(frozen=True)
class LatticePolygon:
    """A polygon given by its vertices in counterclockwise order."""

    vertices: tuple

    def __init__(self, vertices: Sequence):
        object.__setattr__(self, "vertices", tuple(Vec2(*v) for v in vertices))

    def __len__(self):
        return len(self.vertices)

    def edges(self):
        vs = self.vertices
        return [(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))]

    def scaled(self, k) -> "LatticePolygon":
        return LatticePolygon([v * k for v in self.vertices])

    def is_integral(self) -> bool:
        return all(v.is_integral() for v in self.vertices)


def polygon_area2(p) -> Number:
    """Twice the signed area (shoelace); positive for counterclockwise order."""
    vs = p.vertices if isinstance(p, LatticePolygon) else list(p)
    n = len(vs)
    return _norm(sum(vs[i][0] * vs[(i + 1) % n][1] - vs[(i + 1) % n][0] * vs[i][1]
                     for i in range(n)))


def orient(a, b, c) -> int:
    """Sign of the turn a -> b -> c (+1 left, -1 right, 0 collinear)."""
    v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return (v > 0) - (v < 0)


def on_segment(p, a, b) -> bool:
    """True when ``p`` lies on the closed segment ``[a, b]``."""
    if orient(a, b, p) != 0:
        return False
    return (min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= p[1] <= max(a[1], b[1]))


def segments_cross(a, b, c, d) -> bool:
    """Proper crossing of open segments ``(a, b)`` and ``(c, d)``."""
    o1, o2 = orient(a, b, c), orient(a, b, d)
    o3, o4 = orient(c, d, a), orient(c, d, b)
    return o1 * o2 < 0 and o3 * o4 < 0


def segments_touch(a, b, c, d) -> bool:
    """Closed segments share at least one point."""
    if segments_cross(a, b, c, d):
        return True
    return (on_segment(c, a, b) or on_segment(d, a, b)
            or on_segment(a, c, d) or on_segment(b, c, d))


def point_in_polygon(p, vertices) -> int:
    """+1 strictly inside, 0 on the boundary, -1 outside (simple polygon)."""
    n = len(vertices)
    inside = False
    for i in range(n):
        a, b = vertices[i], vertices[(i + 1) % n]
        if on_segment(p, a, b):
            return 0
        if (a[1] > p[1]) != (b[1] > p[1]):
            # exact comparison of the crossing abscissa against p.x
            lhs = (p[0] - a[0]) * (b[1] - a[1])
            rhs = (b[0] - a[0]) * (p[1] - a[1])
            if (b[1] - a[1] > 0 and lhs < rhs) or (b[1] - a[1] < 0 and lhs > rhs):
                inside = not inside
    return 1 if inside else -1


def lattice_points(p) -> list:
    """All lattice points of the closed region of a convex or simple polygon."""
    vs = p.vertices if isinstance(p, LatticePolygon) else [Vec2(*v) for v in p]
    if not all(v.is_integral() for v in vs):
        raise ValueError("lattice_points needs integral vertices")
    xs = [int(v.x) for v in vs]
    ys = [int(v.y) for v in vs]
    out = []
    for x in range(min(xs), max(xs) + 1):
        for y in range(min(ys), max(ys) + 1):
            if point_in_polygon((x, y), vs) >= 0:
                out.append(Vec2(x, y))
    return out


def segment_lattice_points(a, b) -> list:
    """Lattice points on the segment from ``a`` to ``b`` in order, endpoints included."""
    a = Vec2(int(a[0]), int(a[1]))
    g = lattice_length(Vec2(b[0] - a[0], b[1] - a[1]))
    if g == 0:
        return [a]
    step = Vec2((int(b[0]) - a.x) // g, (int(b[1]) - a.y) // g)
    return [a + step * t for t in range(g + 1)]
