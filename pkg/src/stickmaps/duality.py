"""Dual spherical polygons and the direct-sum (derivative) construction.

Index conventions: ``dual(P)[j]`` is the co-oriented pole of arc ``j`` of
``P`` (``P[j] -> P[j+1]``). Consequently

* dual arc ``k`` (``V[k] -> V[k+1]``) lies on the circle polar to ``P[k+1]``
  and its length is the exterior angle of ``P`` at ``P[k+1]``;
* ``dual(dual(P))[j] == -P[j+1]``;
* ``direct_sum(P, dual(P))`` has vertices ``P[j] x V[j]`` (even slots) and
  ``P[j+1] x V[j]`` (odd slots).
"""
from __future__ import annotations

import numpy as np

from .errors import CoincidentVertices, DegenerateDual, DualMismatch, GeometryError
from .geometry import TOL, SphericalPolygon, angle_between, unit


def dual_sides(p: SphericalPolygon, dual_vertices) -> np.ndarray:
    """Sides of the dual's arcs, co-oriented away from the primal vertex they surround."""
    V = np.asarray(dual_vertices, float)
    v_next = np.roll(p.vertices, -1, axis=0)
    left_pole = np.cross(V, np.roll(V, -1, axis=0))
    return np.where(np.einsum("ij,ij->i", left_pole, v_next) < 0, 1, -1)


def _tangents(p: SphericalPolygon):
    """Unit tangents at each vertex: arriving along arc j-1 and leaving along arc j."""
    v = p.vertices
    prev, nxt = np.roll(v, 1, axis=0), np.roll(v, -1, axis=0)
    t_out = unit(nxt - np.einsum("ij,ij->i", nxt, v)[:, None] * v)
    t_in = -unit(prev - np.einsum("ij,ij->i", prev, v)[:, None] * v)
    return t_in, t_out


def interior_angles(p: SphericalPolygon) -> np.ndarray:
    """Angle at each vertex between the arcs back to the previous and on to the next vertex."""
    t_in, t_out = _tangents(p)
    return angle_between(-t_in, t_out)


def exterior_angles(p: SphericalPolygon) -> np.ndarray:
    """Exterior angle at each vertex, measured on the co-oriented side.

    When the arcs on both sides of a vertex are co-oriented alike this is
    pi minus the interior angle; when the co-orientation flips it is the
    interior angle itself.
    """
    turn = np.pi - interior_angles(p)
    same = p.sides == np.roll(p.sides, 1)
    return np.where(same, turn, np.pi - turn)


def dual_spherical_polygon(p: SphericalPolygon) -> SphericalPolygon:
    if np.any(p.arc_lengths() >= np.pi - TOL.angle):
        raise DegenerateDual("an arc is (nearly) a half great circle; its pole is undefined")
    v = p.vertices
    V = p.sides[:, None] * unit(np.cross(v, np.roll(v, -1, axis=0)))
    nxt = np.roll(V, -1, axis=0)
    ang = angle_between(V, nxt)
    if np.any(ang < TOL.angle) or np.any(ang > np.pi - TOL.antipodal):
        raise DegenerateDual("consecutive dual vertices coincide or are antipodal")
    return SphericalPolygon(V, dual_sides(p, V))


def _rotate(x, axis, angle):
    """Rodrigues rotation of rows ``x`` about unit rows ``axis`` (right-handed)."""
    c, s = np.cos(angle), np.sin(angle)
    k_dot = np.einsum("ij,ij->i", axis, x)[:, None]
    return x * c + np.cross(axis, x) * s + axis * k_dot * (1 - c)


def direct_sum(p: SphericalPolygon, q: SphericalPolygon) -> SphericalPolygon:
    """McRae's ``P + P^dual``: alternately rotate dual and primal segments by pi/2.

    Dual segment ``L_j`` (``V[j-1] -> V[j]``) is turned counterclockwise
    about ``P[j]`` as north pole; primal segment ``P[j] -> P[j+1]`` is turned
    counterclockwise about ``V[j]`` as south pole. The result is
    left co-oriented.
    """
    expected = dual_spherical_polygon(p).vertices
    if len(q) != len(p) or np.max(np.linalg.norm(q.vertices - expected, axis=1)) > TOL.unit:
        raise DualMismatch("second polygon is not the dual of the first")
    v, V = p.vertices, q.vertices
    V_prev = np.roll(V, 1, axis=0)
    v_next = np.roll(v, -1, axis=0)
    half = np.pi / 2
    L_start, L_end = _rotate(V_prev, v, half), _rotate(V, v, half)
    l_start, l_end = _rotate(v, -V, half), _rotate(v_next, -V, half)
    # consecutive rotated segments must share endpoints
    gaps = np.concatenate([np.linalg.norm(L_end - l_start, axis=1),
                           np.linalg.norm(l_end - np.roll(L_start, -1, axis=0), axis=1)])
    if np.max(gaps) > 1e3 * TOL.unit:
        raise GeometryError("rotated segments do not close up")
    out = np.empty((2 * len(v), 3))
    out[0::2] = l_start
    out[1::2] = l_end
    return SphericalPolygon(unit(out))


def w_polygon(p: SphericalPolygon, require_distinct: bool = True) -> SphericalPolygon:
    """Vertices ``w_j``: a quarter turn to the left of each directed arc ``j``.

    The graph reading of ``w`` needs the vertices of ``p`` and ``-p`` to be
    pairwise distinct; that is checked unless ``require_distinct`` is off.
    """
    v = p.vertices
    if require_distinct:
        c = np.linalg.norm(np.cross(v[:, None, :], v[None, :, :]), axis=-1)
        i, j = np.triu_indices(len(v), k=1)
        if np.any(c[i, j] < TOL.unit):
            raise CoincidentVertices("two vertices coincide or are antipodal")
    return SphericalPolygon(unit(np.cross(v, np.roll(v, -1, axis=0))))


def cyclic_match(a, b, tol=1e-9):
    """Shifts ``s`` with ``a[j] == b[j + s]`` for all ``j`` (within ``tol``)."""
    a, b = np.asarray(a, float), np.asarray(b, float)
    if a.shape != b.shape:
        return []
    return [s for s in range(len(a))
            if np.max(np.linalg.norm(a - np.roll(b, -s, axis=0), axis=1)) <= tol]
