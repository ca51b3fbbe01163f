import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import rotation
from stickmaps.duality import cyclic_match, direct_sum, dual_spherical_polygon
from stickmaps.errors import ValidationError, ZeroTorsionEdge
from stickmaps.geometry import unit
from stickmaps.indicatrix import (binormals_unnormalized, binotrix, darboux, frenet_data, notrix, tantrix,
                                  torsion_angles)
from stickmaps.knot import PolygonalKnot, random_knot, total_curvature

knots = st.builds(random_knot, st.integers(5, 20), st.integers(0, 10_000))


def test_q_examples(Q):
    T = tantrix(Q).vertices
    expected = [[1, 0, 0], [0, 1, 0], unit([-1, 0, 1]), unit([0, -1, -1])]
    # row i is the direction of X_{i-1} -> X_i, so the edge X_0 -> X_1 is row 1
    assert np.allclose(np.roll(T, -1, axis=0), expected, atol=1e-15)
    assert np.allclose(binotrix(Q).vertices[1], [0, 0, 1])
    assert np.allclose(notrix(Q).vertices[2], [0, -1, 0])
    assert frenet_data(Q).theta[1] == pytest.approx(np.pi / 2)


def test_vertex_counts(fixtures):
    for k in fixtures.values():
        assert len(tantrix(k)) == k.n
        assert len(binotrix(k)) == k.n
        assert len(notrix(k)) == 2 * k.n
        assert len(darboux(k)) == 2 * k.n


@given(knots)
def test_lengths_match_frenet_sums(k):
    f = frenet_data(k)
    assert tantrix(k).length() == pytest.approx(total_curvature(k), abs=1e-9)
    assert binotrix(k).length() == pytest.approx(f.total_absolute_torsion, abs=1e-9)
    assert darboux(k).length() == pytest.approx(k.n * np.pi, abs=1e-9)
    assert np.allclose(darboux(k).arc_lengths(), np.pi / 2, atol=1e-12)


def test_torsion_sign_matches_determinant(random_knots):
    for k in random_knots:
        T = tantrix(k).vertices
        det = np.einsum("ij,ij->i", np.cross(np.roll(T, 1, axis=0), T), np.roll(T, -1, axis=0))
        assert np.array_equal(np.sign(torsion_angles(k)), np.sign(det))


def test_frame_orthogonality(fixtures):
    for k in fixtures.values():
        T, B, N = tantrix(k).vertices, binotrix(k).vertices, notrix(k).vertices
        assert np.all(np.abs(np.einsum("ij,ij->i", B, T)) < 1e-9)
        assert np.all(np.abs(np.einsum("ij,ij->i", B, np.roll(T, -1, axis=0))) < 1e-9)
        assert np.allclose(np.linalg.norm(N, axis=1), 1, atol=1e-9)
        assert np.allclose(unit(binormals_unnormalized(k)), B)


def test_indicatrix_identities(fixtures):
    for k in fixtures.values():
        T, B, N, D = tantrix(k), binotrix(k), notrix(k), darboux(k)
        assert np.allclose(dual_spherical_polygon(T).vertices, B.vertices, atol=1e-9)
        assert np.array_equal(dual_spherical_polygon(T).sides, B.sides)
        assert np.allclose(direct_sum(T, dual_spherical_polygon(T)).vertices, N.vertices, atol=1e-9)
        assert np.allclose(dual_spherical_polygon(N).vertices, D.vertices, atol=1e-9)


@given(st.integers(0, 10_000), st.floats(0.1, 10))
def test_similarity_equivariance(seed, scale):
    k = random_knot(8, seed % 200)
    R = rotation(seed)
    moved = k.transformed(R, translation=[1.0, 2.0, 3.0], scale=scale)
    for f in (tantrix, binotrix, notrix, darboux):
        assert np.allclose(f(moved).vertices, f(k).vertices @ R.T, atol=1e-9)


def test_reversal(torus23):
    k = torus23
    r = k.reversed()
    assert cyclic_match(tantrix(r).vertices[::-1], -tantrix(k).vertices)
    assert total_curvature(r) == pytest.approx(total_curvature(k))
    assert frenet_data(r).total_absolute_torsion == pytest.approx(frenet_data(k).total_absolute_torsion)


def test_trefoil_curvature_exceeds_4pi(torus23, hextrefoil):
    assert tantrix(torus23).length() > 4 * np.pi
    assert tantrix(hextrefoil).length() > 4 * np.pi


def test_zero_torsion_is_rejected_before_darboux():
    # X_0..X_3 coplanar: the middle edge has zero torsion, caught as a coplanarity violation
    Z = PolygonalKnot([[0, 0, 0], [1, 0, 0], [1, 1, 0], [2, 1, 0], [2, 3, 1], [-1, 2, -1]])
    with pytest.raises(ValidationError) as err:
        darboux(Z)
    assert "coplanar_vertices" in err.value.report.rules()
    assert issubclass(ZeroTorsionEdge, ValueError)


def test_frenet_json(Q):
    data = frenet_data(Q).to_json()
    assert data["total_curvature"] == pytest.approx(tantrix(Q).length())
    assert len(data["tau"]) == 4
