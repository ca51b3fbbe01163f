import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

import oracles
from conftest import rotation
from stickmaps import maps
from stickmaps.errors import RegularityError
from stickmaps.geometry import unit
from stickmaps.indicatrix import binotrix, darboux, tantrix
from stickmaps.knot import PolygonalKnot, random_knot
from stickmaps.sampling import fibonacci_sphere, uniform_sphere

knots = st.builds(random_knot, st.integers(5, 20), st.integers(0, 10_000))
directions = st.tuples(*[st.floats(-1, 1)] * 3).map(np.array).filter(lambda v: np.linalg.norm(v) > 0.1).map(unit)

ORACLES = {"bridge": oracles.bridge, "inflection": oracles.inflection,
           "tantrix_bridge": oracles.tantrix_bridge, "tantrix_inflection": oracles.tantrix_inflection}
# A 5-stick knot with a level edge between two rising edges along z.
SHELF = [[0, 0, 0], [1, 0, 1], [2, 0.5, 1], [3, 1.3, 2], [1, 3, 0.5]]
# Middle edge (0,1)->(1,1) of a Z in the xy projection.
ZIGZAG = [[0, 0, 0], [0, 1, 0.1], [1, 1, 0.3], [1, 2, 0.2], [3, 1, 1], [-1, -1, 0.5]]


@pytest.mark.parametrize("which", maps.MAPS)
def test_both_methods_match_brute_force(which):
    for seed in range(12):
        k = random_knot(6 + seed, seed)
        V = uniform_sphere(20, seed + 500)
        d, c, deg = maps.evaluate_both(which, k, V)
        for v, x, y, g in zip(V, d, c, deg):
            if not g:
                assert x == y == ORACLES[which](k.vertices, v)


@given(knots, directions)
def test_antipodal_invariance(k, v):
    for which in maps.MAPS:
        d, c, deg = maps.evaluate_both(which, k, np.array([v, -v]))
        assume(not deg.any())
        assert d[0] == d[1] and c[0] == c[1]


@given(knots, directions, st.integers(0, 1000))
def test_rotation_equivariance(k, v, seed):
    R = rotation(seed)
    kr = k.transformed(R)
    for which in maps.MAPS:
        a, _, da = maps.evaluate_both(which, k, v[None])
        b, _, db = maps.evaluate_both(which, kr, (R @ v)[None])
        if not (da[0] or db[0]):
            assert a[0] == b[0]


@given(knots, st.integers(0, 2**32))
def test_parity_and_bounds(k, seed):
    V = uniform_sphere(50, seed)
    for which in maps.MAPS:
        rep = maps.sample_map(k, which, V)
        assert rep.disagreements == 0
        assert rep.bound_violations() == 0
        if which != "tantrix_inflection":
            assert np.all(rep.values % 2 == 0)
    assert np.all(maps.bridge_direct(k, V) >= 2)


def test_bridge_q_by_hand(Q):
    v = unit([1, 2, 3])
    # heights 0, 1, 3, 5 (times 1/sqrt 14): one maximum, one minimum
    assert maps.bridge_direct(Q, v) == maps.bridge_via_tantrix(Q, v) == 2


def test_bridge_plateau_counts_once(Q):
    z = [0, 0, 1]
    prof = maps.bridge_profile(Q, z)
    assert prof["plateaus"] == [{"edges": [1, 2], "kind": "extremum"}]
    assert maps.bridge_direct(Q, z) == maps.bridge_via_tantrix(Q, z) == 2
    shelf = PolygonalKnot(SHELF)
    prof = maps.bridge_profile(shelf, z)
    assert prof["plateaus"][0]["kind"] == "shelf" and prof["count"] == 3
    assert maps.bridge_direct(shelf, z) == maps.bridge_via_tantrix(shelf, z) == 3
    assert maps.degenerate_mask("bridge", shelf, np.array([z]))[0]


def test_inflection_stick_types(Q, torus23):
    T = tantrix(Q).vertices
    sticks = maps.inflection_sticks(Q, T[1])
    assert sticks["iii"] == [1]
    assert maps.inflection_direct(Q, T[1]) == maps.inflection_via_binotrix(Q, T[1])
    z = PolygonalKnot(ZIGZAG)
    assert 2 in maps.inflection_sticks(z, [0, 0, 1])["i"]
    # v in the osculating plane at X_i: edges i and i+1 project to parallel sticks
    k = torus23
    B = binotrix(k).vertices
    for i in (0, 7, 31):
        v = unit(np.cross(B[i], [0.3, -0.2, 0.9]))
        assert i in maps.inflection_sticks(k, v)["ii"]
        assert maps.inflection_direct(k, v) == maps.inflection_via_binotrix(k, v)


def test_arc_height_extrema_example():
    assert maps.arc_height_extrema(unit([1, 0, 1]), unit([-1, 0, 1]), [0, 0, 1]) == 1
    assert maps.arc_height_extrema(unit([1, 0, 1]), unit([0, 1, 1]), [1, 0, 0]) == 0


def test_tantrix_inflection_regularity(hextrefoil):
    D = darboux(hextrefoil).vertices
    v = unit(np.cross(D[3], [0.1, 0.7, -0.4]))
    with pytest.raises(RegularityError):
        maps.tantrix_inflection_via_darboux(hextrefoil, v)
    T = tantrix(hextrefoil).vertices
    w = unit(np.cross(T[2], [0.5, 0.1, 0.3]))
    with pytest.raises(RegularityError):
        maps.tantrix_inflection_direct(hextrefoil, w)
    rep = maps.sample_map(hextrefoil, "tinflection", np.array([v, w, [0.3, 0.4, 0.5]]))
    assert rep.degenerate.tolist() == [True, True, False]
    assert rep.disagreements == 0


def test_classification_sums(torus23):
    for v in uniform_sphere(20, 1):
        c = maps.classify_projection(torus23, v)
        assert sum(c.inflection_sticks) == maps.inflection_direct(torus23, v)
        assert c.d_a + c.d_b + 2 * c.d_c == maps.tantrix_inflection_direct(torus23, v)


def test_direction_flags(Q):
    assert maps.direction(Q, [0.3, 0.5, 0.7]).regular_for == frozenset(maps.MAPS)
    assert "bridge" not in maps.direction(Q, [0, 0, 1]).regular_for


def test_sample_map_report(torus23):
    rep = maps.sample_map(torus23, "bridge", count=5000)
    assert rep.min >= 4 and rep.disagreements == 0
    data = rep.to_json()
    assert set(data) >= {"map", "samples", "min", "max", "histogram", "degenerate"}
    assert set(data["samples"][0]) == {"v", "direct", "indicatrix", "degenerate"}
    assert sum(data["histogram"].values()) == 5000 - data["degenerate"]
    u = maps.sample_map(torus23, "tbridge", count=100, seed=3, sampler="uniform")
    assert np.array_equal(u.directions, maps.sample_map(torus23, "tbridge", count=100, seed=3,
                                                        sampler="uniform").directions)
    with pytest.raises(ValueError):
        maps.sample_map(torus23, "nonsense", count=10)


def test_degenerate_fraction_small_on_rotated_fixtures(fixtures):
    for seed, k in enumerate(fixtures.values()):
        kr = k.transformed(rotation(seed))
        for which in maps.MAPS:
            assert maps.sample_map(kr, which, count=2000).degenerate_fraction < 0.01


def test_single_and_batch_agree(Q):
    V = fibonacci_sphere(7)
    assert maps.bridge_direct(Q, V).tolist() == [maps.bridge_direct(Q, v) for v in V]
    assert isinstance(maps.bridge_direct(Q, V[0]), int)
