from fractions import Fraction

from hypothesis import given, strategies as st

from cusp.exactgeom import (
    AffineMap,
    LatticePolygon,
    Mat2,
    Vec2,
    complete_basis,
    det2,
    lattice_length,
    lattice_points,
    mat_product,
    point_in_polygon,
    polygon_area2,
    segment_lattice_points,
)

UNIT_SQUARE = LatticePolygon([(0, 0), (1, 0), (1, 1), (0, 1)])
BASIS = LatticePolygon([(0, 0), (1, 0), (0, 1)])


def test_det2_examples():
    assert det2((1, 0), (0, 1)) == 1
    assert det2((1, 0), (3, 1)) == 1
    assert det2((0, 1), (1, 0)) == -1


def test_mat_product_examples():
    assert mat_product([]) == Mat2.identity()
    assert mat_product([Mat2(0, 1, -1, -1)] * 3) == Mat2.identity()
    n = mat_product(Mat2(0, 1, -1, d) for d in (4, 6, 5))
    assert n == Mat2(-6, 29, -23, 111)
    assert n.det == 1 and n.trace == 105


def test_lattice_points_examples():
    assert len(lattice_points(UNIT_SQUARE)) == 4
    assert len(lattice_points(LatticePolygon([(0, 0), (2, 0), (0, 2)]))) == 6
    assert sorted(lattice_points(BASIS)) == [(0, 0), (0, 1), (1, 0)]


def test_polygon_area2_examples():
    assert polygon_area2(BASIS) == 1
    assert polygon_area2(UNIT_SQUARE) == 2
    assert polygon_area2(LatticePolygon([(0, 0), (2, 0), (0, 1)])) == 2
    assert polygon_area2([(0, 0), (0, 1), (1, 0)]) == -1


def test_affine_map_algebra():
    f = AffineMap(Mat2(2, 1, 1, 1), Vec2(1, 0))
    g = AffineMap(Mat2(1, 1, 0, 1), Vec2(Fraction(1, 2), 3))
    p = Vec2(3, -2)
    assert (f @ g)(p) == f(g(p))
    assert f.inverse()(f(p)) == p
    assert (f @ f.inverse()).is_identity()
    assert AffineMap.fixing((5, 7), Mat2(2, 1, 1, 1))((5, 7)) == (5, 7)
    assert f.scaled(3)(p * 3) == f(p) * 3


def test_point_in_polygon_boundary_and_outside():
    assert point_in_polygon((1, 1), [(0, 0), (2, 0), (2, 2), (0, 2)]) == 1
    assert point_in_polygon((2, 1), [(0, 0), (2, 0), (2, 2), (0, 2)]) == 0
    assert point_in_polygon((3, 1), [(0, 0), (2, 0), (2, 2), (0, 2)]) == -1


def test_segment_lattice_points():
    assert segment_lattice_points((0, 0), (4, 2)) == [(0, 0), (2, 1), (4, 2)]
    assert lattice_length((4, 2)) == 2


coords = st.integers(-6, 6)


@given(st.lists(st.tuples(coords, coords), min_size=3, max_size=3))
def test_pick_identity_on_triangles(pts):
    if polygon_area2(pts) == 0:
        return
    if polygon_area2(pts) < 0:
        pts = pts[::-1]
    pts = [Vec2(*p) for p in pts]
    boundary = sum(lattice_length(pts[(i + 1) % 3] - pts[i]) for i in range(3))
    total = len(lattice_points(pts))
    interior = total - boundary
    assert polygon_area2(pts) == 2 * interior + boundary - 2


@given(coords, coords)
def test_complete_basis_gives_unimodular_pair(a, b):
    if lattice_length((a, b)) != 1:
        return
    w = complete_basis((a, b))
    assert det2((a, b), w) == 1
    # any unimodular pair consists of primitive vectors
    assert lattice_length(w) == 1


@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), min_size=0, max_size=6))
def test_mat_product_is_unimodular(ts):
    ms = [Mat2(1, s, 0, 1) @ Mat2(1, 0, t, 1) for s, t in ts]
    assert mat_product(ms).det == 1
