"""Tantrix, binotrix, notrix and Darboux indicatrix of a stick knot.

Index table (n = number of knot vertices, all indices mod n):

=================  ===========================================
``T[i]``           direction of edge ``X_{i-1} -> X_i``
``B[i]``           ``unit(T[i] x T[i+1])``, osculating plane at ``X_i``
``theta[i]``       angle ``T[i] -> T[i+1]`` (curvature at ``X_i``)
``tau[i]``         torsion angle along edge ``X_{i-1} X_i``
``N[2i]``          ``T[i] x B[i]``
``N[2i+1]``        ``T[i+1] x B[i]``
``D[2i]``          ``B[i]``
``D[2i+1]``        ``sign(tau[i+1]) T[i+1]``
=================  ===========================================

Tantrix arc ``i`` has length ``theta[i]``; binotrix arc ``i`` (``B[i] ->
B[i+1]``) has length ``|tau[i+1]|``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ZeroTorsionEdge
from .geometry import TOL, SphericalPolygon, signed_torsion_angle, unit
from .knot import PolygonalKnot, turning_angles
from . import duality


def tantrix(k: PolygonalKnot) -> SphericalPolygon:
    k.require_valid()
    return SphericalPolygon(unit(k.edges()))


def binormals_unnormalized(k: PolygonalKnot) -> np.ndarray:
    """``T[i] x T[i+1]`` without normalization, handy for sign arguments."""
    T = tantrix(k).vertices
    return np.cross(T, np.roll(T, -1, axis=0))


def binotrix(k: PolygonalKnot) -> SphericalPolygon:
    T = tantrix(k)
    B = unit(binormals_unnormalized(k))
    return SphericalPolygon(B, duality.dual_sides(T, B))


def notrix(k: PolygonalKnot) -> SphericalPolygon:
    T = tantrix(k).vertices
    B = unit(binormals_unnormalized(k))
    N = np.empty((2 * len(T), 3))
    N[0::2] = np.cross(T, B)
    N[1::2] = np.cross(np.roll(T, -1, axis=0), B)
    return SphericalPolygon(unit(N))


def torsion_angles(k: PolygonalKnot) -> np.ndarray:
    """``tau[i]``, the signed torsion along edge ``X_{i-1} X_i``.

    Both neighbouring edges are taken pointing away from ``X_{i-1} X_i``, so a
    planar convex corner has zero torsion and ``|tau[i]|`` is the angle from
    ``B[i-1]`` to ``B[i]``. The sign is that of ``det(T[i-1], T[i], T[i+1])``.
    """
    T = tantrix(k).vertices
    n = len(T)
    return np.array([signed_torsion_angle(-T[i - 1], -T[i], T[(i + 1) % n]) for i in range(n)])


def darboux(k: PolygonalKnot) -> SphericalPolygon:
    tau = torsion_angles(k)
    zero = np.flatnonzero(np.abs(tau) <= TOL.angle)
    if len(zero):
        raise ZeroTorsionEdge(int(zero[0]))
    T = tantrix(k).vertices
    B = unit(binormals_unnormalized(k))
    D = np.empty((2 * len(T), 3))
    D[0::2] = B
    D[1::2] = np.sign(np.roll(tau, -1))[:, None] * np.roll(T, -1, axis=0)
    N = notrix(k)
    return SphericalPolygon(D, duality.dual_sides(N, D))


@dataclass(frozen=True)
class FrenetData:
    theta: np.ndarray
    tau: np.ndarray

    @property
    def total_curvature(self) -> float:
        return float(np.sum(self.theta))

    @property
    def total_absolute_torsion(self) -> float:
        return float(np.sum(np.abs(self.tau)))

    def to_json(self) -> dict:
        return {"theta": self.theta.tolist(), "tau": self.tau.tolist(),
                "total_curvature": self.total_curvature,
                "total_absolute_torsion": self.total_absolute_torsion}


def frenet_data(k: PolygonalKnot) -> FrenetData:
    k.require_valid()
    return FrenetData(turning_angles(k), torsion_angles(k))


INDICATRICES = {
    "tantrix": tantrix,
    "binotrix": binotrix,
    "notrix": notrix,
    "darboux": darboux,
}
