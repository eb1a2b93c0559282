"""One test per acceptance criterion; each prints a PASS/FAIL line."""

import filecmp
import itertools
import json
import random
from contextlib import contextmanager
from functools import reduce
from importlib import resources

import pytest

from cusp.cli import EXIT_OK, main
from cusp.compactify import close_up
from cusp.cycles import (
    apply_surgery,
    charge,
    cycles_equal,
    dual_cycle,
    dual_monodromy,
    is_negative_definite,
    monodromy,
    same_cyclic_word,
    sl2z_word,
)
from cusp.exactgeom import Mat2, polygon_area2
from cusp.pipeline import construct
from cusp.surgery import (
    EmptyBoundary,
    NotToric,
    base_from_recipe,
    boundary_d_values,
    develop,
    fan_from_toric_cycle,
    recipe_cycle_surgeries,
    solve_lengths,
)
from cusp.tricomplex import contract_star, star, triangulate

from recipe_gen import recipe_suite

FIG6_STAR = (3, 2, 3, 2, 2, 2, 3, 2, 2)


@contextmanager
def criterion(key):
    try:
        yield
    except BaseException:
        print(f"{key}: FAIL")
        raise
    print(f"{key}: PASS")


def bundled(name):
    return json.loads((resources.files("cusp") / "recipes" / f"{name}.json").read_text())


def equal_up_to_rotation(a, b):
    a, b = tuple(a), tuple(b)
    return len(a) == len(b) and any(a[i:] + a[:i] == b for i in range(len(a)))


def random_nd_cycles(count, seed):
    r = random.Random(seed)
    out = []
    while len(out) < count:
        c = [r.randint(2, 9) for _ in range(r.randint(1, 12))]
        if max(c) >= 3:
            out.append(tuple(c))
    return out


def matmul(x, y):
    return [[sum(x[i][k] * y[k][j] for k in range(2)) for j in range(2)] for i in range(2)]


def oracle_monodromy(c):
    m = [[1, 0], [0, 1]]
    for d in c:
        m = matmul(m, [[0, 1], [-1, d]])
    return m


@pytest.fixture(scope="module")
def fig6():
    return construct(bundled("figure6"))


def test_A1_dual_cycle_golden():
    with criterion("A1"):
        d = dual_cycle((6, 9))
        assert equal_up_to_rotation(d, (3, 2, 2, 2, 3, 2, 2, 2, 2, 2, 2))
        assert equal_up_to_rotation(dual_cycle(d), (6, 9))


def test_A2_charge_identity():
    with criterion("A2"):
        cycles = random_nd_cycles(1000, seed=2)
        assert all(is_negative_definite(c) for c in cycles)
        for c in cycles:
            d = dual_cycle(c)
            assert charge(c) + charge(d) == 24, c
            assert equal_up_to_rotation(dual_cycle(d), c), c


def test_A3_surgery_bookkeeping():
    with criterion("A3"):
        rec = bundled("figure6")
        assert rec["toric_cycle"] == [0, 0, 0, 0]
        ops = [op["op"] for op in rec["surgeries"]]
        per_edge = [sum(1 for op in rec["surgeries"] if op["op"] == "blowup" and op["edge"] == e)
                    for e in range(4)]
        assert per_edge == [4, 2, 6, 5] and ops[-1] == "smooth" and ops.count("smooth") == 1
        b = base_from_recipe(rec)
        assert boundary_d_values(b) == (4, 6, 5)
        assert charge((4, 6, 5)) == 18
        assert len(b.singular_points) == 18


def _toric_cycles(seed=4, chains=300):
    # every short cycle the fan construction accepts, then random corner blow-ups of them
    short = []
    for n in range(3, 6):
        for c in itertools.product(range(-3, 4), repeat=n):
            try:
                fan_from_toric_cycle(c)
            except NotToric:
                continue
            short.append(c)
    out = list(short)
    r = random.Random(seed)
    for _ in range(chains):
        c = list(r.choice(short))
        for _ in range(r.randint(1, 8)):
            i = r.randrange(len(c))
            j = (i + 1) % len(c)
            c[i] += 1
            c[j] += 1
            c.insert(i + 1, 1)
        fan_from_toric_cycle(c)
        out.append(tuple(c))
    return out


def test_A4_monodromy():
    with criterion("A4"):
        n = monodromy((4, 6, 5))
        assert n.det == 1
        o = oracle_monodromy((4, 6, 5))
        assert o[0][0] + o[1][1] == 105 == n.trace
        assert [[n.a, n.b], [n.c, n.d]] == o
        toric = _toric_cycles()
        assert len(toric) > 300
        for c in toric:
            assert monodromy(c) == Mat2.identity(), c
        for c in random_nd_cycles(1000, seed=4):
            assert monodromy(c).trace > 2, c


def test_A5_full_pipeline(fig6):
    with criterion("A5"):
        r = fig6.report
        assert r.triple_point_ok and r.charts_ok and r.sphere_ok
        assert r.euler == 2
        assert r.counts["vertices"] - r.counts["edges"] + r.counts["faces"] == 2
        assert r.charge_total == 24
        assert tuple(dual_cycle((4, 6, 5))) == FIG6_STAR
        assert cycles_equal(r.v0_cycle, FIG6_STAR)
        assert is_negative_definite(r.v0_cycle)
        # the holonomy word at v0 against the dual product, both read counterclockwise
        hol = star(fig6.complex, fig6.complex.v0).holonomy
        assert same_cyclic_word(sl2z_word(hol), sl2z_word(dual_monodromy(r.v0_cycle)))
        assert r.v0_word_ok and r.ok


@pytest.mark.parametrize("name,toric,support", [
    ("charge3_model1", (3, 2, 1, 2, 3, 1, 2, 2, 2, 2, 1), [3, 6, 11]),
    ("charge3_model2", (3, 2, 2, 1, 3, 2, 1, 2, 2, 2, 1), [4, 7, 11]),
])
def test_A6_charge3_models(name, toric, support):
    with criterion(f"A6 {name}"):
        rec = bundled(name)
        assert tuple(rec["toric_cycle"]) == toric
        lengths = solve_lengths(fan_from_toric_cycle(toric), set(rec["lengths"]["support"]))
        # positive lengths exactly on the edges with d = 1, numbered from 1
        positive = [i + 1 for i, x in enumerate(lengths) if x > 0]
        assert positive == support == [i + 1 for i, d in enumerate(toric) if d == 1]
        full = {op["edge"]: op["size"] for op in rec["surgeries"]}
        assert all(full.get(i - 1) == lengths[i - 1] for i in support)
        b = base_from_recipe(rec)
        assert not any(s.free for s in b.sides)
        with pytest.raises(EmptyBoundary):
            develop(b)
        s = close_up(b)
        assert len(s.pieces) == 1 and s.cone is None
        triangulate(s)
        c = construct(rec)
        v0 = contract_star(c.report.v0_cycle)
        assert cycles_equal(v0, (6, 9))
        assert charge(v0) == 21
        others = sum(st.charge for st in c.report.stars if st.center != c.complex.v0)
        assert others == 3
        assert c.report.ok


@pytest.fixture(scope="module")
def closed_suite():
    recipes = recipe_suite(45, seed=7) + [bundled(n) for n in
                                           ("figure6", "charge3_model1", "charge3_model2")]
    return [construct(r) for r in recipes]


def test_A7_property_suites(closed_suite):
    with criterion("A7"):
        # (b) cycle-level against geometry-level surgery
        small = recipe_suite(200, seed=11, full=False)
        assert len(small) == 200
        for rec in small:
            predicted = reduce(apply_surgery, recipe_cycle_surgeries(rec),
                               tuple(rec["toric_cycle"]))
            assert boundary_d_values(base_from_recipe(rec)) == predicted, rec
        checked = skipped = 0
        for c in closed_suite:
            t = c.complex
            # (a) triple point formula
            assert all(t.d[h] + t.d[t.twin[h]] == 2 for h in range(3 * len(t.faces)))
            # (c) unimodular faces
            assert all(polygon_area2(ch) == 1 for ch in t.charts)
            # (d) predicted stars at surgery points
            for p in c.surgery_points:
                if p["ok"] is None:
                    skipped += 1
                    continue
                assert p["ok"], (c.recipe, p)
                checked += 1
            # (e) flip rewrite result at v0
            v0 = contract_star(c.report.v0_cycle)
            assert min(v0) >= 2 and max(v0) >= 3, c.recipe
            assert c.report.ok, c.report.problems
        print(f"A7: {len(small)} cycle/geometry cases, {len(closed_suite)} complexes, "
              f"{checked} surgery points checked, {skipped} not planar")
        assert checked > 10 * skipped


def test_A8_determinism(tmp_path, capsys):
    with criterion("A8"):
        cfg = tmp_path / "config.json"
        cfg.write_text(json.dumps({"recipe": bundled("figure6"), "options": {"periods": 2}}))
        a, b = tmp_path / "a", tmp_path / "b"
        assert main(["construct", "--recipe", str(cfg), "--out", str(a), "--svg"]) == EXIT_OK
        assert main(["construct", "--recipe", str(cfg), "--out", str(b), "--svg"]) == EXIT_OK
        names = sorted(p.name for p in a.iterdir())
        assert names == sorted(p.name for p in b.iterdir())
        match, mismatch, errors = filecmp.cmpfiles(a, b, names, shallow=False)
        assert not mismatch and not errors
        assert main(["verify", str(a / "complex.json")]) == EXIT_OK
