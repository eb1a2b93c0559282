import json
from importlib import resources

import pytest
from hypothesis import assume, given, settings, strategies as st

from cusp.compactify import close_up
from cusp.cycles import SurgeryOnCycle, charge, cycles_equal, is_negative_definite
from cusp.exactgeom import Vec2, orient, polygon_area2
from cusp.surgery import base_from_recipe
from cusp.tricomplex import (
    TriangulationError,
    all_stars,
    contract_star,
    ear_clip,
    expected_star_cycle,
    minimize_star,
    planar_star,
    star,
    triangulate,
    unimodular_refinement,
    verify_type_iii,
)


def bundled(name):
    return json.loads((resources.files("cusp") / "recipes" / f"{name}.json").read_text())


def planar_faces(poly):
    return [t for tri in ear_clip(poly) for t in unimodular_refinement(tri)]


@pytest.fixture(scope="module")
def fig6_complex():
    return triangulate(close_up(base_from_recipe(bundled("figure6"))))


def test_unit_square_two_faces():
    faces = planar_faces([(0, 0), (1, 0), (1, 1), (0, 1)])
    assert len(faces) == 2
    assert all(polygon_area2(f) == 1 for f in faces)


def test_thin_triangle_two_faces():
    faces = unimodular_refinement([(0, 0), (2, 0), (0, 1)])
    assert len(faces) == 2
    assert sorted(polygon_area2(f) for f in faces) == [1, 1]


def test_empty_triangle_with_large_area_is_split():
    # no boundary lattice points besides corners; twice-area 5
    faces = unimodular_refinement([(0, 0), (1, 0), (2, 5)])
    assert len(faces) == 5


def test_ear_clip_rejects_self_crossing():
    with pytest.raises(TriangulationError):
        ear_clip([(0, 0), (2, 2), (2, 0), (0, 2)])


lattice_tri = st.tuples(*[st.tuples(st.integers(-6, 6), st.integers(-6, 6))] * 3)


@settings(max_examples=150, deadline=None)
@given(lattice_tri)
def test_refinement_is_unimodular_and_complete(tri):
    a, b, c = (Vec2(*p) for p in tri)
    assume(orient(a, b, c) > 0)
    faces = unimodular_refinement((a, b, c))
    assert all(polygon_area2(f) == 1 for f in faces)
    assert len(faces) == polygon_area2((a, b, c))


def test_grid_star_has_charge_zero():
    dirs = [(1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1)]
    _, d = planar_star(dirs)
    assert d == (1, 1, 1, 1, 1, 1)
    assert charge(d) == 0


def test_square_fan_star():
    _, d = planar_star([(1, 0), (0, 1), (-1, 0), (0, -1)])
    assert d == (0, 0, 0, 0)


def test_expected_star_cycle_examples():
    grid = (1, 1, 1, 1, 1, 1)
    # a blow-up merges two neighbouring edges: 1 + 1 - 2
    assert expected_star_cycle(grid, [SurgeryOnCycle("internal_blowup", 0)]) == (0, 1, 1, 1, 1)
    # a smoothing raises one edge
    assert expected_star_cycle(grid, [SurgeryOnCycle("node_smoothing", 2)]) == (1, 1, 2, 1, 1, 1)
    # merging around the end of the list wraps
    assert cycles_equal(expected_star_cycle(grid, [SurgeryOnCycle("internal_blowup", 5)]),
                        (0, 1, 1, 1, 1))
    with pytest.raises(IndexError):
        expected_star_cycle(grid, [SurgeryOnCycle("node_smoothing", 6)])


def test_contract_star():
    assert contract_star((7, 1)) == (5,)
    assert charge(contract_star((7, 1))) == charge((7, 1))
    assert contract_star((3, 2, 2)) == (3, 2, 2)


def test_triangulated_sphere_invariants(fig6_complex):
    t = fig6_complex
    for h in range(3 * len(t.faces)):
        assert t.twin[t.twin[h]] == h
        assert t.d[h] + t.d[t.twin[h]] == 2
        assert t.compute_d(h) == t.d[h]
    assert all(polygon_area2(ch) == 1 for ch in t.charts)
    assert sum(s.charge for s in all_stars(t)) == 24


def test_minimize_star_at_v0(fig6_complex):
    t = fig6_complex
    before = [f for f in t.faces]
    m = minimize_star(t)
    assert t.faces == before  # input untouched
    c = star(m, m.v0).cycle
    assert min(c) >= 2 and max(c) >= 3
    assert cycles_equal(c, (3, 2, 3, 2, 2, 2, 3, 2, 2))
    r = verify_type_iii(m, (3, 2, 3, 2, 2, 2, 3, 2, 2))
    assert r.ok, r.problems
    assert r.euler == 2 and r.v0_word_orientation == "same"


def test_verify_flags_bad_d(fig6_complex):
    m = minimize_star(fig6_complex)
    m.d[0] += 1
    r = verify_type_iii(m, (3, 2, 3, 2, 2, 2, 3, 2, 2))
    assert not r.ok and not r.triple_point_ok


def test_charge3_v0_star():
    b = base_from_recipe(bundled("charge3_model1"))
    m = minimize_star(triangulate(close_up(b)))
    c = contract_star(star(m, m.v0).cycle)
    assert cycles_equal(c, (6, 9)) and is_negative_definite(c)
    assert charge(c) == 21
