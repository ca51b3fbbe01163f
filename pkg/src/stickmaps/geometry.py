"""Primitives on the unit sphere.

Points of S^2 are plain ``(3,)`` float arrays; batches are ``(m, 3)``.
Great circles are stored by their pole, arcs are always the shorter
great-circle arc between their endpoints.
"""
from __future__ import annotations

import contextlib
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    AntipodalEndpoints,
    BoundaryTorsion,
    DegenerateArc,
    DegenerateProjection,
    GeometryError,
)


@dataclass
class Tolerances:
    unit: float = 1e-9
    antipodal: float = 1e-9
    proj: float = 1e-9
    angle: float = 1e-9
    on_circle: float = 1e-9
    arc: float = 1e-9
    # knot-level, see stickmaps.knot
    edge: float = 1e-9
    general_position: float = 1e-7
    _defaults: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._defaults = {k: v for k, v in vars(self).items() if not k.startswith("_")}

    @contextlib.contextmanager
    def scaled(self, factor: float):
        """Temporarily multiply every tolerance by ``factor``.

        Scaled values must stay inside ``[1e-12, 1e-4]``.
        """
        new = {k: v * factor for k, v in self._defaults.items()}
        bad = {k: v for k, v in new.items() if not 1e-12 <= v <= 1e-4}
        if bad:
            raise ValueError(f"tolerance scale {factor} puts {sorted(bad)} outside [1e-12, 1e-4]")
        old = {k: getattr(self, k) for k in self._defaults}
        try:
            for k, v in new.items():
                setattr(self, k, v)
            yield self
        finally:
            for k, v in old.items():
                setattr(self, k, v)


TOL = Tolerances()


def unit(v) -> np.ndarray:
    """Normalize a vector (or each row of a batch)."""
    v = np.asarray(v, dtype=float)
    n = np.linalg.norm(v, axis=-1, keepdims=True)
    if np.any(n == 0):
        raise GeometryError("cannot normalize a zero vector")
    return v / n


def is_unit(v, tol=None) -> bool:
    tol = TOL.unit if tol is None else tol
    return bool(np.all(np.abs(np.linalg.norm(np.asarray(v, float), axis=-1) - 1.0) < tol))


def angle_between(a, b):
    """Unsigned angle in [0, pi]; stable for nearly (anti)parallel inputs."""
    a = np.asarray(a, float)
    b = np.asarray(b, float)
    c = np.linalg.norm(np.cross(a, b), axis=-1)
    d = np.sum(a * b, axis=-1)
    return np.arctan2(c, d)


def signs(x, eps):
    """Three-valued sign with a dead band of half-width ``eps``."""
    x = np.asarray(x, float)
    return np.where(x > eps, 1, np.where(x < -eps, -1, 0))


@dataclass(frozen=True)
class GreatCircle:
    pole: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "pole", unit(self.pole))

    def height(self, p):
        return np.asarray(p, float) @ self.pole

    def contains(self, p) -> bool:
        return bool(abs(self.height(p)) < TOL.on_circle)


@dataclass(frozen=True)
class Arc:
    start: np.ndarray
    end: np.ndarray

    def __post_init__(self):
        s, e = unit(self.start), unit(self.end)
        d = float(s @ e)
        if abs(d + 1.0) < TOL.antipodal:
            raise AntipodalEndpoints("arc endpoints are antipodal; the shorter arc is undefined")
        if angle_between(s, e) < TOL.arc:
            raise DegenerateArc("arc endpoints coincide")
        object.__setattr__(self, "start", s)
        object.__setattr__(self, "end", e)

    def reversed(self) -> "Arc":
        return Arc(self.end, self.start)

    @property
    def pole(self) -> np.ndarray:
        """Left pole of the directed arc, seen from outside the sphere."""
        return unit(np.cross(self.start, self.end))

    def point(self, t):
        """Point at arc-length ``t`` from the start."""
        u = unit(self.end - (self.start @ self.end) * self.start)
        t = np.asarray(t, float)[..., None]
        return np.cos(t) * self.start + np.sin(t) * u


def arc_length(a: Arc) -> float:
    return float(angle_between(a.start, a.end))


@dataclass(frozen=True)
class IntersectionCount:
    transversal: int = 0
    interval: int = 0
    on_circle_vertices: int = 0

    def total(self) -> int:
        return self.transversal + self.interval


def arc_circle_intersection(a: Arc, c: GreatCircle) -> IntersectionCount:
    """Classify how an arc meets a great circle.

    Endpoints lying on the circle are reported in ``on_circle_vertices``
    and not counted here; the polygon-level count attributes them to
    vertex chains. An arc lying entirely in the circle is one interval.
    """
    hs = signs([c.height(a.start), c.height(a.end)], TOL.on_circle)
    on = int(np.sum(hs == 0))
    if on == 2:
        return IntersectionCount(interval=1, on_circle_vertices=2)
    # points of the shorter arc are positive combinations of its endpoints,
    # so the height changes sign at most once and only between opposite ends
    transversal = int(hs[0] * hs[1] < 0)
    return IntersectionCount(transversal=transversal, on_circle_vertices=on)


def signed_torsion_angle(prev, axis, next) -> float:
    """Directed angle from ``prev`` to ``next`` projected onto the plane normal to ``axis``.

    Looking along ``axis`` (pointing away from the viewer), counterclockwise
    is positive, so the sign matches ``det(prev, axis, next)``.
    """
    axis = unit(axis)
    prev = np.asarray(prev, float)
    next = np.asarray(next, float)
    a = prev - (prev @ axis) * axis
    b = next - (next @ axis) * axis
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na < TOL.proj * max(1.0, np.linalg.norm(prev)) or nb < TOL.proj * max(1.0, np.linalg.norm(next)):
        raise DegenerateProjection("an edge projects to a point along the axis")
    a, b = a / na, b / nb
    phi = float(np.arctan2(-axis @ np.cross(a, b), a @ b))
    if abs(phi) > np.pi - TOL.angle:
        raise BoundaryTorsion(f"torsion angle {phi!r} is at the boundary +-pi")
    return phi


_SIDE_NAMES = {1: "left", -1: "right"}


@dataclass(frozen=True, eq=False)
class SphericalPolygon:
    """Closed spherical polygon with co-oriented arcs.

    ``sides[j]`` is +1 when the co-orienting normal of arc ``j`` (from
    vertex ``j`` to ``j + 1``) points to its left seen from outside the
    sphere, and -1 for right.
    """

    vertices: np.ndarray
    sides: np.ndarray = None

    def __post_init__(self):
        v = np.array(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 3 or len(v) < 2:
            raise GeometryError("a spherical polygon needs an (n, 3) vertex array with n >= 2")
        if not is_unit(v):
            raise GeometryError("polygon vertices must be unit vectors")
        if self.sides is None:
            s = np.ones(len(v), dtype=int)
        else:
            s = np.array(self.sides, dtype=int).reshape(-1)
            if s.shape != (len(v),) or not np.all(np.abs(s) == 1):
                raise GeometryError("sides must be +1/-1, one per arc")
        nxt = np.roll(v, -1, axis=0)
        d = np.sum(v * nxt, axis=1)
        if np.any(np.abs(d + 1.0) < TOL.antipodal):
            raise AntipodalEndpoints("consecutive polygon vertices are antipodal")
        if np.any(angle_between(v, nxt) < TOL.arc):
            raise DegenerateArc("consecutive polygon vertices coincide")
        v.setflags(write=False)
        s.setflags(write=False)
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "sides", s)

    def __len__(self):
        return len(self.vertices)

    @property
    def co_orientation(self) -> str:
        if np.all(self.sides == 1):
            return "left"
        if np.all(self.sides == -1):
            return "right"
        return "mixed"

    def arcs(self) -> list[Arc]:
        v = self.vertices
        return [Arc(v[j], v[(j + 1) % len(v)]) for j in range(len(v))]

    def arc_lengths(self) -> np.ndarray:
        return angle_between(self.vertices, np.roll(self.vertices, -1, axis=0))

    def length(self) -> float:
        return float(np.sum(self.arc_lengths()))

    def poles(self) -> np.ndarray:
        """Co-oriented pole of every arc."""
        return self.sides[:, None] * unit(np.cross(self.vertices, np.roll(self.vertices, -1, axis=0)))

    def to_json(self) -> dict:
        out = {"co_orientation": self.co_orientation,
               "vertices": self.vertices.tolist()}
        if self.co_orientation == "mixed":
            out["sides"] = [_SIDE_NAMES[int(s)] for s in self.sides]
        return out

    @classmethod
    def from_json(cls, data: dict) -> "SphericalPolygon":
        verts = np.asarray(data["vertices"], dtype=float)
        co = data.get("co_orientation", "left")
        if co == "mixed":
            sides = [1 if s == "left" else -1 for s in data["sides"]]
        elif co in ("left", "right"):
            sides = np.full(len(verts), 1 if co == "left" else -1)
        else:
            raise GeometryError(f"unknown co_orientation {co!r}")
        return cls(verts, sides)


def antipode(p: SphericalPolygon) -> SphericalPolygon:
    """Negate every vertex.

    The antipodal map reverses the orientation of the sphere, so a normal
    pointing left of an arc is carried to one pointing right of the image arc.
    """
    return SphericalPolygon(-p.vertices, -p.sides)


def polygon_circle_intersections(p: SphericalPolygon, c: GreatCircle) -> IntersectionCount:
    """Intersection count of a closed polygon with a circle, arc by arc.

    Transversal crossings come from :func:`arc_circle_intersection`; every
    maximal run of consecutive on-circle vertices (including the arcs
    joining them) adds one interval intersection.
    """
    per_arc = [arc_circle_intersection(a, c) for a in p.arcs()]
    transversal = sum(r.transversal for r in per_arc)
    on = np.abs(p.vertices @ c.pole) < TOL.on_circle
    if on.all():
        runs = 1
    else:
        runs = int(np.sum(on & ~np.roll(on, 1)))
    return IntersectionCount(transversal=transversal, interval=runs,
                             on_circle_vertices=int(on.sum()))


def cyclic_sign_changes(s) -> np.ndarray:
    """Count crossings of cyclic three-valued sign sequences (one per row).

    Strict sign flips between neighbours count once each, and so does every
    maximal run of zeros; an all-zero row counts once.
    """
    s = np.atleast_2d(s)
    flips = np.sum(s * np.roll(s, -1, axis=1) < 0, axis=1)
    zero = s == 0
    runs = np.sum(zero & ~np.roll(zero, 1, axis=1), axis=1)
    runs = np.where(zero.all(axis=1), 1, runs)
    return flips + runs


def crossing_counts(vertices, poles, eps=None) -> np.ndarray:
    """Vectorized intersection counts of one closed polygon with many circles."""
    eps = TOL.on_circle if eps is None else eps
    h = np.atleast_2d(poles) @ np.asarray(vertices, float).T
    return cyclic_sign_changes(signs(h, eps))


def arcs_cross(p, q, a, b, tol=0.0) -> np.ndarray:
    """Whether shorter arcs ``p->q`` (rows) meet shorter arcs ``a->b`` (rows).

    Returns an ``(len(p), len(a))`` boolean matrix. ``tol`` widens every
    arc slightly so near-touches count as meeting.
    """
    p, q, a, b = (np.atleast_2d(np.asarray(x, float)) for x in (p, q, a, b))
    n1 = unit(np.cross(p, q))  # (m, 3)
    n2 = unit(np.cross(a, b))  # (k, 3)
    c = np.cross(n1[:, None, :], n2[None, :, :])  # (m, k, 3)
    cn = np.linalg.norm(c, axis=-1, keepdims=True)
    ok = cn[..., 0] > 1e-15
    c = np.where(cn > 1e-15, c / np.where(cn > 0, cn, 1.0), 0.0)
    hit = np.zeros(c.shape[:2], dtype=bool)
    for sgn in (1.0, -1.0):
        x = sgn * c
        in1 = (np.einsum("mkj,mj->mk", np.cross(p[:, None, :], x), n1) >= -tol) & \
              (np.einsum("mkj,mj->mk", np.cross(x, q[:, None, :]), n1) >= -tol)
        in2 = (np.einsum("mkj,kj->mk", np.cross(a[None, :, :], x), n2) >= -tol) & \
              (np.einsum("mkj,kj->mk", np.cross(x, b[None, :, :]), n2) >= -tol)
        hit |= in1 & in2
    return hit & ok
