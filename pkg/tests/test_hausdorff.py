import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chabauty import subgroups as sg
from chabauty.cloud import PointCloud
from chabauty.hausdorff import (
    directed_hausdorff,
    hausdorff,
    hausdorff_bound_true_sets,
    hausdorff_brute,
    hausdorff_grid,
    nearest_brute,
    nearest_grid,
)
from chabauty.metric import INFINITY, CompactPoint, Space, SpaceMismatch, distance
from chabauty.sampler import sample

TWO_PI = 2 * math.pi


def line_cloud(xs, inf=True):
    return PointCloud(Space.LINE, np.asarray(xs, dtype=float), None, inf)


def cyl_cloud(xs, ts, inf=True):
    return PointCloud(Space.CYLINDER, np.asarray(xs, dtype=float), np.asarray(ts, dtype=float), inf)


def oracle_directed(a, b):
    """Plain double loop over the scalar metric."""
    return max(min(distance(a.space, p, q) for q in b.points) for p in a.points)


def oracle_hausdorff(a, b):
    return max(oracle_directed(a, b), oracle_directed(b, a))


# --- examples -----------------------------------------------------------------


def test_identical_sets():
    a = line_cloud([0.0])
    assert hausdorff_brute(a, a).value == 0.0
    assert hausdorff_grid(a, a).value == 0.0


def test_directed_is_asymmetric():
    zero = line_cloud([0.0], inf=False)
    zero_inf = line_cloud([0.0])
    assert directed_hausdorff(zero, zero_inf).value == 0.0
    back = directed_hausdorff(zero_inf, zero)
    assert back.value == pytest.approx(2.0)
    assert back.witness_a == INFINITY
    assert back.witness_b == CompactPoint.line(0.0)


@pytest.mark.parametrize("method", ["brute", "grid"])
def test_g100_against_zero_and_infinity(method):
    s = sample(sg.Cyclic(100.0), 1e4, 1.0)
    g0 = sample(sg.Trivial(), 1e4, 1.0)
    d = directed_hausdorff(s, g0, method)
    assert d.value == pytest.approx(2 / math.sqrt(10001), abs=1e-12)
    # the worst point is the first nonzero lattice point; -100 comes first in point order
    assert d.witness_a == CompactPoint.line(-100.0)
    res = hausdorff(s, g0, method)
    assert res.value == pytest.approx(0.019999, abs=1e-6)
    assert res.directed_ba == 0.0


def test_small_r_bound_against_fine_line_grid():
    r = 1 / 20
    a = sample(sg.Cyclic(r), 100.0, 1.0)
    b = sample(sg.FullLine(), 100.0, 1 / 200)
    assert hausdorff(a, b).value <= r


def test_space_mismatch():
    with pytest.raises(SpaceMismatch):
        hausdorff_brute(line_cloud([0.0]), cyl_cloud([0.0], [0.0]))
    with pytest.raises(SpaceMismatch):
        hausdorff_grid(line_cloud([0.0]), cyl_cloud([0.0], [0.0]))


def test_unknown_method():
    with pytest.raises(ValueError):
        directed_hausdorff(line_cloud([0.0]), line_cloud([1.0]), method="kdtree")


def test_json_shape():
    res = hausdorff_bound_true_sets(sample(sg.Cyclic(1.0), 5.0, 1.0), sample(sg.Trivial(), 5.0, 1.0))
    obj = json.loads(json.dumps(res.to_json()))
    assert set(obj) == {"value", "directed_ab", "directed_ba", "witness_a", "witness_b", "method", "interval"}
    assert obj["value"] == max(obj["directed_ab"], obj["directed_ba"])
    assert obj["witness_b"] in ("inf", [0.0, 0.0])


# --- agreement with the scalar oracle -----------------------------------------


@pytest.mark.parametrize("space", list(Space))
@pytest.mark.parametrize("seed", range(5))
def test_engines_match_scalar_oracle(space, seed):
    rng = np.random.default_rng(seed)
    clouds = []
    for _ in range(2):
        n = int(rng.integers(1, 40))
        xs = 3 * rng.standard_cauchy(n)
        inf = bool(rng.integers(2))
        clouds.append(line_cloud(xs, inf) if space is Space.LINE else cyl_cloud(xs, rng.uniform(0, TWO_PI, n), inf))
    a, b = clouds
    expected = oracle_hausdorff(a, b)
    assert hausdorff_brute(a, b).value == pytest.approx(expected, abs=1e-12)
    assert hausdorff_grid(a, b).value == pytest.approx(expected, abs=1e-12)


def test_cylinder_glue_without_infinity():
    # both clouds lack infinity; the nearest point to x=+30 is x=-30 through the glued ends
    a = cyl_cloud([30.0], [0.0], inf=False)
    b = cyl_cloud([-30.0, 0.0], [2.0, 0.0], inf=False)
    expected = oracle_directed(a, b)
    for method in ("brute", "grid"):
        d = directed_hausdorff(a, b, method)
        assert d.value == pytest.approx(expected, rel=1e-12)
        assert d.witness_b == CompactPoint.cylinder(-30.0, 2.0)


# --- grid route agrees exactly with brute force --------------------------------


def random_cloud(space, rng, near_infinity=False):
    n = int(rng.integers(1, 500))
    if near_infinity:
        far = 8.0 if space is Space.CYLINDER else 50.0
        x = rng.choice([-1.0, 1.0], n) * rng.uniform(far, 6 * far, n)
    else:
        x = 2 * rng.standard_cauchy(n)
    theta = rng.uniform(0, TWO_PI, n)
    return PointCloud(space, x, theta, bool(rng.integers(2)))


@pytest.mark.parametrize("space", list(Space))
@pytest.mark.parametrize("near_infinity", [False, True])
def test_grid_matches_brute_on_random_pairs(space, near_infinity):
    rng = np.random.default_rng(99)
    for _ in range(25):
        a = random_cloud(space, rng, near_infinity)
        b = random_cloud(space, rng, near_infinity)
        db, jb = nearest_brute(a, b)
        dg, jg = nearest_grid(a, b)
        assert np.array_equal(db, dg)
        assert np.array_equal(jb, jg)  # same witnesses, ties included


@pytest.mark.parametrize("cell", [1e-3, 0.05, 0.5, 2.0])
def test_grid_independent_of_cell_size(cell):
    rng = np.random.default_rng(5)
    a = random_cloud(Space.CYLINDER, rng)
    b = random_cloud(Space.CYLINDER, rng)
    assert hausdorff_grid(a, b, cell_size=cell).value == hausdorff_brute(a, b).value


@pytest.mark.parametrize("space", list(Space))
def test_singleton_against_large_grid(space):
    g = sg.FullLine() if space is Space.LINE else sg.WholePlane()
    big = sample(g, 5.0, 0.0499 if space is Space.LINE else 0.08)
    if space is Space.LINE:
        big = PointCloud(Space.LINE, np.linspace(-50, 50, 10_000))
    assert big.n_finite >= 10_000 or space is Space.CYLINDER
    for p in (0.3, 7.0, -123.0):
        single = line_cloud([p], False) if space is Space.LINE else cyl_cloud([p], [1.0], False)
        assert hausdorff_grid(single, big).value == hausdorff_brute(single, big).value


def test_ties_break_towards_lowest_index():
    a = line_cloud([0.0], inf=False)
    b = line_cloud([-1.0, 1.0], inf=False)
    for method in ("brute", "grid"):
        d = directed_hausdorff(a, b, method)
        assert d.witness_b == CompactPoint.line(-1.0)


# --- metric properties of the finite Hausdorff distance -------------------------

small_clouds = st.lists(st.floats(-30, 30), min_size=1, max_size=12)


@settings(max_examples=60, deadline=None)
@given(small_clouds, small_clouds, small_clouds, st.booleans(), st.booleans(), st.booleans())
def test_symmetry_and_triangle(xa, xb, xc, ia, ib, ic):
    a, b, c = line_cloud(xa, ia), line_cloud(xb, ib), line_cloud(xc, ic)
    ab, bc, ac = hausdorff(a, b).value, hausdorff(b, c).value, hausdorff(a, c).value
    assert hausdorff(a, a).value == 0.0
    assert ab == hausdorff(b, a).value
    assert ac <= ab + bc + 1e-12


@settings(max_examples=60, deadline=None)
@given(small_clouds, small_clouds)
def test_zero_iff_same_points(xa, xb):
    a, b = line_cloud(xa), line_cloud(xb)
    same = set(a.points) == set(b.points)
    assert (hausdorff(a, b).value == 0.0) == same


@settings(max_examples=30, deadline=None)
@given(
    st.lists(st.tuples(st.floats(-10, 10), st.floats(0, 6.28)), min_size=1, max_size=10),
    st.lists(st.tuples(st.floats(-10, 10), st.floats(0, 6.28)), min_size=1, max_size=10),
    st.lists(st.tuples(st.floats(-10, 10), st.floats(0, 6.28)), min_size=1, max_size=10),
)
def test_triangle_on_cylinder(pa, pb, pc):
    a, b, c = (cyl_cloud([p[0] for p in s], [p[1] for p in s], False) for s in (pa, pb, pc))
    assert hausdorff(a, c).value <= hausdorff(a, b).value + hausdorff(b, c).value + 1e-12


# --- refinement and certified intervals ------------------------------------------


def test_monotone_refinement_large_r():
    g0 = sample(sg.Trivial(), 1e4, 1.0)
    vals = [hausdorff(sample(sg.Cyclic(r), 1e4, 1.0), g0).value for r in (1, 3, 10, 30, 100, 300, 1000)]
    assert all(b < a for a, b in zip(vals, vals[1:]))
    assert vals[-1] < 0.0021


def test_monotone_refinement_small_r():
    line = sample(sg.FullLine(), 20.0, 1e-3)
    rows = []
    for r in (1.0, 0.3, 0.1, 0.03, 0.01):
        s = sample(sg.Cyclic(r), 20.0, 1.0)
        rows.append((hausdorff(s, line, "grid").value, s.covering_radius + line.covering_radius))
    vals = [v for v, _ in rows]
    assert all(b <= a for a, b in zip(vals, vals[1:]))
    assert vals[-1] <= rows[-1][1]


def test_interval_for_same_subgroup_contains_zero():
    a = sample(sg.SlantedLines(2, 0.5), 3.0, 0.1)
    b = sample(sg.SlantedLines(2, 0.5), 3.0, 0.037)
    lo, hi = hausdorff_bound_true_sets(a, b).interval
    assert lo == 0.0 <= hi


def test_interval_lattice_close_to_slanted_lines():
    b = sample(sg.canonicalize_b(1, complex(0.01, TWO_PI * 0.5)), 8.0, 0.005)
    d = sample(sg.SlantedLines(2, 0.0), 8.0, 0.005)
    lo, hi = hausdorff_bound_true_sets(b, d).interval
    assert hi <= 0.1


def test_interval_separates_distinct_limits():
    a = sample(sg.Discrete(1), 5.0, 0.05)
    full = sample(sg.WholePlane(), 5.0, 0.05)
    lo, hi = hausdorff_bound_true_sets(a, full).interval
    assert lo > 0.5
