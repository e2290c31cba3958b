import cmath
import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chabauty import subgroups as sg

TWO_PI = 2 * math.pi


def enumerate_lattice(m, z, radius=25.0):
    """All points a*z + b*2πi/m, with coefficient ranges wide enough to cover the disc |w| <= radius."""
    period = TWO_PI / m
    na = math.ceil(radius / z.real) + 1
    nb = math.ceil((na * abs(z.imag) + radius) / period) + 1
    a, b = np.meshgrid(np.arange(-na, na + 1), np.arange(-nb, nb + 1))
    return (a * z + b * 1j * period).ravel()


def same_points_within(m, z1, z2, radius=20.0, tol=1e-9):
    """Brute force: the two generating sets give the same lattice points inside |w| <= radius."""
    p1 = enumerate_lattice(m, z1)
    p2 = enumerate_lattice(m, z2)
    p1 = p1[np.abs(p1) <= radius]
    p2 = p2[np.abs(p2) <= radius]
    if len(p1) != len(p2):
        return False
    d = np.abs(p1[:, None] - p2[None, :]).min(axis=1)
    return bool(np.all(d <= tol))


# oracle sanity: different lattices are told apart
def test_enumeration_oracle_distinguishes():
    assert not same_points_within(1, 1 + 0j, 1 + 1j)
    assert same_points_within(1, 1 + 0j, 1 + TWO_PI * 1j)


def test_canonicalize_already_canonical():
    g = sg.canonicalize_b(1, 1 + 0j)
    assert g == sg.Lattice(1, 1 + 0j)


def test_canonicalize_subtracts_one_period():
    z = 1 + TWO_PI * 1.25j
    g = sg.canonicalize_b(1, z)
    assert g.m == 1
    assert g.z.real == 1.0
    assert g.z.imag == pytest.approx(TWO_PI * 0.25, abs=1e-12)
    assert same_points_within(1, z, g.z)


def test_canonicalize_half_period_for_m2():
    z = 0.5 + math.pi * 1j
    g = sg.canonicalize_b(2, z)
    assert g.z.real == 0.5
    assert g.z.imag == pytest.approx(0.0, abs=1e-12)
    assert same_points_within(2, z, g.z)


def test_canonicalize_negative_imaginary_part():
    g = sg.canonicalize_b(3, 0.7 - 0.1j)
    assert 0 <= g.z.imag < TWO_PI / 3
    assert same_points_within(3, 0.7 - 0.1j, g.z)


@pytest.mark.parametrize("z", [0j, -1 + 1j, 1j])
def test_canonicalize_rejects_nonpositive_real_part(z):
    with pytest.raises(ValueError):
        sg.canonicalize_b(1, z)


def test_m_zero_degenerates():
    assert sg.discrete(0) == sg.ImaginaryAxis()
    assert sg.canonicalize_b(0, 0.4 + 3j) == sg.VerticalLines(0.4)
    assert sg.slanted(0, 1.0) == sg.WholePlane()


def test_lattice_constructor_demands_canonical_strip():
    with pytest.raises(ValueError):
        sg.Lattice(1, 1 + 7j)


def test_r_subgroup_generator_positive():
    assert sg.r_subgroup(-3) == sg.Cyclic(3.0)
    assert sg.r_subgroup(0) == sg.Trivial()


def test_equal_examples():
    assert sg.subgroups_equal(sg.Discrete(1), sg.Discrete(1))
    assert sg.subgroups_equal(sg.canonicalize_b(1, 1 + 0j), sg.canonicalize_b(1, 1 + TWO_PI * 1j))
    assert not sg.subgroups_equal(sg.VerticalLines(1.0), sg.SlantedLines(1, 0.0))


def test_equal_across_the_wrap():
    a = sg.Lattice(1, complex(1, 0.0))
    b = sg.Lattice(1, complex(1, TWO_PI - 1e-12))
    assert sg.subgroups_equal(a, b)


def test_contains_examples():
    assert sg.contains(sg.Discrete(1), TWO_PI * 1j, 0)
    assert sg.contains(sg.SlantedLines(1, 0.0), 3.7 + TWO_PI * 1j, 1e-12)
    assert not sg.contains(sg.canonicalize_b(1, 1 + 0j), 0.5, 1e-9)
    assert sg.distance_to(sg.canonicalize_b(1, 1 + 0j), 0.5) == pytest.approx(0.5)


def test_contains_rejects_negative_tol():
    with pytest.raises(ValueError):
        sg.contains(sg.WholePlane(), 0, -1.0)


def test_iso_types():
    assert sg.classify_isomorphism_type(sg.Discrete(3)) is sg.IsoType.Z
    assert sg.classify_isomorphism_type(sg.VerticalLines(2.0)) is sg.IsoType.Z_X_R
    assert sg.classify_isomorphism_type(sg.WholePlane()) is sg.IsoType.C
    assert sg.classify_isomorphism_type(sg.canonicalize_b(2, 1 + 1j)) is sg.IsoType.Z2
    assert sg.classify_isomorphism_type(sg.SlantedLines(2, 1.0)) is sg.IsoType.Z_X_R
    assert sg.classify_isomorphism_type(sg.ImaginaryAxis()) is sg.IsoType.R
    assert sg.classify_isomorphism_type(sg.Trivial()) is sg.IsoType.TRIVIAL


ALL_CSTAR = [
    sg.Discrete(1),
    sg.Discrete(5),
    sg.canonicalize_b(1, 0.3 + 2j),
    sg.canonicalize_b(4, 2.5 + 0.1j),
    sg.VerticalLines(0.7),
    sg.SlantedLines(1, 0.0),
    sg.SlantedLines(3, -2.5),
    sg.ImaginaryAxis(),
    sg.WholePlane(),
]


@pytest.mark.parametrize("g", ALL_CSTAR, ids=lambda g: type(g).__name__)
def test_every_variant_contains_the_period(g):
    for k in range(-3, 4):
        assert sg.contains(g, TWO_PI * k * 1j, 1e-12)


@pytest.mark.parametrize("g", ALL_CSTAR, ids=lambda g: type(g).__name__)
def test_json_round_trip(g):
    back = sg.from_json(json.loads(json.dumps(sg.to_json(g))))
    assert back == g


def test_json_r_round_trip():
    for g in (sg.Trivial(), sg.Cyclic(0.1 + 0.2), sg.FullLine()):
        assert sg.from_json(json.loads(json.dumps(sg.to_json(g)))) == g


def test_json_rejects_unknown():
    with pytest.raises(ValueError):
        sg.from_json({"family": "E"})
    with pytest.raises(ValueError):
        sg.from_json({"family": "B", "m": 1})


lattice_params = st.tuples(
    st.integers(1, 6),
    st.floats(0.05, 5.0),
    st.floats(-40.0, 40.0),
)


@given(lattice_params)
def test_canonicalize_idempotent_and_contains_generator(params):
    m, x, y = params
    z = complex(x, y)
    g = sg.canonicalize_b(m, z)
    assert sg.canonicalize_b(m, g.z) == g
    assert sg.contains(g, z, 1e-12 * max(1.0, abs(y)))
    assert sg.contains(g, g.z, 1e-12)


@settings(max_examples=30, deadline=None)
@given(lattice_params, st.integers(0, 2**32 - 1))
def test_lattice_distance_matches_enumeration(params, seed):
    m, x, y = params
    g = sg.canonicalize_b(m, complex(x, y))
    pts = enumerate_lattice(m, g.z)
    rng = np.random.default_rng(seed)
    r = 10 * np.sqrt(rng.uniform(0, 1, 100))
    probes = r * np.exp(1j * rng.uniform(0, TWO_PI, 100))
    for w in probes:
        brute = np.abs(pts - w).min()
        assert sg.distance_to(g, w) == pytest.approx(brute, abs=1e-9)


@settings(deadline=None)
@given(st.lists(st.sampled_from(range(6)), min_size=3, max_size=3), st.integers(1, 3), st.floats(0.1, 3.0))
def test_equality_is_an_equivalence(shifts, m, x):
    # the same lattice written with generators shifted by whole imaginary periods
    period = TWO_PI / m
    a, b, c = (sg.canonicalize_b(m, complex(x, 0.3 + k * period)) for k in shifts)
    assert sg.subgroups_equal(a, a)
    assert sg.subgroups_equal(a, b) == sg.subgroups_equal(b, a)
    if sg.subgroups_equal(a, b) and sg.subgroups_equal(b, c):
        assert sg.subgroups_equal(a, c)
    assert sg.subgroups_equal(a, b)


@given(st.sampled_from(ALL_CSTAR), st.sampled_from(ALL_CSTAR), st.sampled_from(ALL_CSTAR))
def test_equality_relation_on_catalogue(a, b, c):
    assert sg.subgroups_equal(a, a)
    assert sg.subgroups_equal(a, b) == sg.subgroups_equal(b, a)
    if sg.subgroups_equal(a, b) and sg.subgroups_equal(b, c):
        assert sg.subgroups_equal(a, c)


@pytest.mark.parametrize(
    "g, w, expected",
    [
        (sg.Discrete(2), 0.3 + math.pi * 1j + 0.1j, math.hypot(0.3, 0.1)),
        (sg.VerticalLines(2.0), 2.9 + 5j, 0.9),
        (sg.SlantedLines(1, 1.0), 1.0 + 0j, 1 / math.sqrt(2)),
        (sg.ImaginaryAxis(), -0.25 + 9j, 0.25),
        (sg.WholePlane(), cmath.exp(2j), 0.0),
    ],
)
def test_closed_form_distances(g, w, expected):
    assert sg.distance_to(g, w) == pytest.approx(expected, abs=1e-12)
