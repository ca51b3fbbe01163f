"""The four projection-counting maps of a stick knot.

Every map is evaluated two ways: *directly*, from the projection of the
knot (or of its tantrix) along/onto the direction, and through the
intersection count of the matching indicatrix with the great circle
orthogonal to the direction. The two must agree at every non-degenerate
direction.

All evaluators accept a single direction ``(3,)`` (returning ``int``) or a
batch ``(m, 3)`` (returning an int array).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import RegularityError
from .geometry import TOL, crossing_counts, cyclic_sign_changes, signs, unit, angle_between
from .indicatrix import binotrix, darboux, notrix, tantrix
from .knot import PolygonalKnot
from .sampling import fibonacci_sphere, tangent_basis, uniform_sphere

MAPS = ("bridge", "inflection", "tantrix_bridge", "tantrix_inflection")
ALIASES = {"tbridge": "tantrix_bridge", "tinflection": "tantrix_inflection"}
INDICATRIX_OF = {"bridge": "tantrix", "inflection": "binotrix",
                 "tantrix_bridge": "notrix", "tantrix_inflection": "darboux"}
UPPER_BOUND_FACTOR = {"bridge": 1, "inflection": 1, "tantrix_bridge": 2, "tantrix_inflection": 2}

_CHUNK = 4096


def canonical(which: str) -> str:
    which = ALIASES.get(which, which).replace("-", "_")
    if which not in MAPS:
        raise ValueError(f"unknown map {which!r}; expected one of {MAPS}")
    return which


def _directions(v):
    V = np.asarray(v, dtype=float)
    single = V.ndim == 1
    return unit(np.atleast_2d(V)), single


def _chunked(fn, k, V):
    """Apply ``fn(k, block)`` over blocks of directions and stitch the outputs."""
    parts = [fn(k, V[i:i + _CHUNK]) for i in range(0, len(V), _CHUNK)] or [fn(k, V[:0])]
    return tuple(np.concatenate(p) for p in zip(*parts))


def _dot(V, P):
    return V @ P.T


# -- bridge -------------------------------------------------------------------

def _bridge_direct(k, V):
    E = k.edges()
    L = np.linalg.norm(E, axis=1)
    H = _dot(V, k.vertices)
    slope = (H - np.roll(H, 1, axis=1)) / L  # edge i runs X_{i-1} -> X_i
    s = signs(slope, TOL.on_circle)
    level = s == 0
    # vertex X_i sits between edges i and i+1
    extrema = np.sum(s * np.roll(s, -1, axis=1) < 0, axis=1)
    plateaus = np.sum(level & ~np.roll(level, 1, axis=1), axis=1)
    plateaus = np.where(level.all(axis=1), 1, plateaus)
    return extrema + plateaus, np.min(np.abs(slope), axis=1)


def _bridge_tantrix(k, V):
    T = tantrix(k).vertices
    return crossing_counts(T, V), np.min(np.abs(_dot(V, T)), axis=1)


def bridge_profile(k: PolygonalKnot, v) -> dict:
    """Maxima, minima and plateaus of the height function along ``v``.

    Plateaus (maximal runs of level edges) are tagged ``"extremum"`` or
    ``"shelf"`` by the slopes on either side.
    """
    k.require_valid()
    V, _ = _directions(v)
    E = k.edges()
    H = (k.vertices @ V[0])
    slope = (H - np.roll(H, 1)) / np.linalg.norm(E, axis=1)
    s = signs(slope, TOL.on_circle)
    n = len(s)
    maxima = [i for i in range(n) if s[i] > 0 and s[(i + 1) % n] < 0]
    minima = [i for i in range(n) if s[i] < 0 and s[(i + 1) % n] > 0]
    plateaus = []
    if np.all(s == 0):
        plateaus.append({"edges": list(range(n)), "kind": "shelf"})
    else:
        for i in range(n):
            if s[i] == 0 and s[i - 1] != 0:
                run = [i]
                while s[(run[-1] + 1) % n] == 0:
                    run.append((run[-1] + 1) % n)
                before, after = s[i - 1], s[(run[-1] + 1) % n]
                plateaus.append({"edges": run, "kind": "extremum" if before * after < 0 else "shelf"})
    return {"maxima": maxima, "minima": minima, "plateaus": plateaus,
            "count": len(maxima) + len(minima) + len(plateaus)}


# -- inflection -----------------------------------------------------------------

def _projected_edges(k, V):
    T = tantrix(k).vertices
    P = T[None, :, :] - _dot(V, T)[..., None] * V[:, None, :]
    return P, np.linalg.norm(P, axis=-1)


def _inflection_masks(k, V):
    """Per-direction masks of inflection sticks of types i, ii, iii, plus a margin.

    Type i marks edge ``i`` (``X_{i-1} X_i``), type ii the edge pair ``(i, i+1)``
    and type iii edge ``i``.
    """
    P, plen = _projected_edges(k, V)
    point = plen < TOL.proj
    Pn = np.roll(P, -1, axis=1)
    pn_len = np.roll(plen, -1, axis=1)
    cross = np.einsum("mj,mnj->mn", V, np.cross(P, Pn))  # signed area of (P_i, P_{i+1})
    with np.errstate(invalid="ignore", divide="ignore"):
        sin = np.where(point | np.roll(point, -1, axis=1), 0.0, cross / (plen * pn_len))
    side = signs(sin, TOL.angle)  # side[i]: where e_{i+1} leaves the line through e_i
    stick = ~point & ~np.roll(point, -1, axis=1)
    type_ii = (side == 0) & stick
    # both neighbours of edge e_i, measured against the line through e_i
    before = np.roll(side, 1, axis=1)  # sign of cross(P_{i-1}, P_i)
    type_i = ~point & (before * side < 0)
    type_iii = point
    margin = np.minimum(np.min(plen, axis=1),
                        np.min(np.where(stick, np.abs(sin), np.inf), axis=1))
    return type_i, type_ii, type_iii, margin


def _inflection_sticks(k, V):
    a, b, c, margin = _inflection_masks(k, V)
    return a.sum(axis=1), b.sum(axis=1), c.sum(axis=1), margin


def inflection_sticks(k: PolygonalKnot, v) -> dict:
    """Edge indices of each inflection-stick type in the projection along ``v``."""
    k.require_valid()
    V, _ = _directions(v)
    a, b, c, _ = _inflection_masks(k, V)
    return {"i": np.flatnonzero(a[0]).tolist(), "ii": np.flatnonzero(b[0]).tolist(),
            "iii": np.flatnonzero(c[0]).tolist()}


def _inflection_direct(k, V):
    a, b, c, margin = _inflection_sticks(k, V)
    return a + b + c, margin


def _inflection_binotrix(k, V):
    B = binotrix(k).vertices
    return crossing_counts(B, V), np.min(np.abs(_dot(V, B)), axis=1)


# -- tantrix-bridge -------------------------------------------------------------

def _tantrix_arcs(k):
    T = tantrix(k).vertices
    Tn = np.roll(T, -1, axis=0)
    theta = angle_between(T, Tn)
    U = unit(Tn - np.einsum("ij,ij->i", T, Tn)[:, None] * T)  # tangent at T_i towards T_{i+1}
    return T, U, theta


def _tantrix_bridge_direct(k, V):
    """Stationary points of the height ``v . p`` along the tantrix.

    On arc ``i`` the height is ``a cos t + b sin t`` with ``a = v.T_i``,
    ``b = v.U_i``; its only possible interior critical point is
    ``t* = atan2(b, a) mod pi``.
    """
    T, U, theta = _tantrix_arcs(k)
    a, b = _dot(V, T), _dot(V, U)
    d0 = b
    d1 = -a * np.sin(theta) + b * np.cos(theta)
    eps = TOL.on_circle
    s0, s1 = signs(d0, eps), signs(d1, eps)
    t_star = np.mod(np.arctan2(b, a), np.pi)
    interior = (s0 != 0) & (s1 != 0) & (t_star > 0) & (t_star < theta)
    at_vertex = s1 * np.roll(s0, -1, axis=1) < 0  # arriving at T_{i+1} vs leaving it
    seq = np.empty((len(V), 2 * len(T)), dtype=int)
    seq[:, 0::2], seq[:, 1::2] = s0, s1
    zero = seq == 0
    runs = np.sum(zero & ~np.roll(zero, 1, axis=1), axis=1)
    runs = np.where(zero.all(axis=1), 1, runs)
    count = interior.sum(axis=1) + at_vertex.sum(axis=1) + runs
    margin = np.minimum(np.min(np.abs(d0), axis=1), np.min(np.abs(d1), axis=1))
    return count, margin


def _tantrix_bridge_notrix(k, V):
    N = notrix(k).vertices
    return crossing_counts(N, V), np.min(np.abs(_dot(V, N)), axis=1)


def arc_height_extrema(start, end, v) -> int:
    """Number of interior height extrema of the shorter arc ``start -> end`` along ``v``."""
    s, e, v = unit(start), unit(end), unit(v)
    theta = float(angle_between(s, e))
    u = unit(e - (s @ e) * s)
    a, b = s @ v, u @ v
    d0, d1 = b, -a * np.sin(theta) + b * np.cos(theta)
    t_star = np.mod(np.arctan2(b, a), np.pi)
    return int(abs(d0) > TOL.on_circle and abs(d1) > TOL.on_circle and 0 < t_star < theta)


# -- tantrix-inflection ---------------------------------------------------------

def _turn_signs(k, V):
    """Turning data of the tantrix projected onto the plane orthogonal to each ``v``.

    ``corner[i]`` > 0 when the projected tantrix turns left at ``T_i`` (angle
    to the left below pi); ``bend[i]`` > 0 when projected arc ``T_i T_{i+1}``
    curves counterclockwise. ``rim[i]`` is the height of ``T_i`` over the plane.
    """
    T, U, theta = _tantrix_arcs(k)
    e1, e2 = tangent_basis(V)

    def cross2d(x, y):  # x, y: (n, 3) tangent vectors, projected per direction
        x1, x2 = x @ e1.T, x @ e2.T
        y1, y2 = y @ e1.T, y @ e2.T
        return (x1 * y2 - x2 * y1).T

    mid = theta / 2
    vel_mid = -np.sin(mid)[:, None] * T + np.cos(mid)[:, None] * U
    pos_mid = np.cos(mid)[:, None] * T + np.sin(mid)[:, None] * U
    bend = cross2d(vel_mid, -pos_mid)  # second derivative of a unit-speed arc is -position
    vel_in = -np.sin(theta)[:, None] * T + np.cos(theta)[:, None] * U  # end of arc i, at T_{i+1}
    corner = cross2d(np.roll(vel_in, 1, axis=0), U)  # arriving at T_i vs leaving it
    rim = _dot(V, T)
    return corner, bend, rim


def _tantrix_inflection_direct(k, V):
    corner, bend, rim = _turn_signs(k, V)
    eps = TOL.on_circle
    regular = np.all(np.abs(rim) > eps, axis=1) & np.all(np.abs(bend) > eps, axis=1)
    d_a, d_b, d_c = _darboux_configurations(np.sign(corner), np.sign(bend))
    count = np.where(regular, d_a + d_b + 2 * d_c, -1)
    margin = np.minimum.reduce([np.min(np.abs(corner), axis=1), np.min(np.abs(bend), axis=1),
                                np.min(np.abs(rim), axis=1)])
    return count, margin


def _darboux_configurations(corner, bend):
    """Classify each projected tantrix arc ``T_i T_{i+1}`` with its two corners.

    The turning sense changes at the start of the arc when ``corner[i]`` and
    ``bend[i]`` disagree and at its end when ``bend[i]`` and ``corner[i+1]``
    disagree. Change only at the end is configuration (a), only at the start
    (b), at both ends (c).
    """
    start = corner != bend
    end = bend != np.roll(corner, -1, axis=1)
    d_a = np.sum(end & ~start, axis=1)
    d_b = np.sum(start & ~end, axis=1)
    d_c = np.sum(start & end, axis=1)
    return d_a, d_b, d_c


def _tantrix_inflection_darboux(k, V):
    D = darboux(k).vertices
    h = _dot(V, D)
    regular = np.all(np.abs(h) > TOL.on_circle, axis=1)
    return np.where(regular, crossing_counts(D, V), -1), np.min(np.abs(h), axis=1)


# -- public evaluators ------------------------------------------------------------

_DIRECT = {"bridge": _bridge_direct, "inflection": _inflection_direct,
           "tantrix_bridge": _tantrix_bridge_direct,
           "tantrix_inflection": _tantrix_inflection_direct}
_VIA = {"bridge": _bridge_tantrix, "inflection": _inflection_binotrix,
        "tantrix_bridge": _tantrix_bridge_notrix,
        "tantrix_inflection": _tantrix_inflection_darboux}


def _evaluate(table, which, k, v):
    k.require_valid()
    V, single = _directions(v)
    counts, _ = _chunked(table[canonical(which)], k, V)
    if canonical(which) == "tantrix_inflection" and np.any(counts < 0):
        raise RegularityError("projection is not regular: a Darboux vertex lies on the circle")
    return int(counts[0]) if single else counts


def direct(which, k, v):
    return _evaluate(_DIRECT, which, k, v)


def via_indicatrix(which, k, v):
    return _evaluate(_VIA, which, k, v)


def bridge_direct(k, v):
    return direct("bridge", k, v)


def bridge_via_tantrix(k, v):
    return via_indicatrix("bridge", k, v)


def inflection_direct(k, v):
    return direct("inflection", k, v)


def inflection_via_binotrix(k, v):
    return via_indicatrix("inflection", k, v)


def tantrix_bridge_direct(k, v):
    return direct("tantrix_bridge", k, v)


def tantrix_bridge_via_notrix(k, v):
    return via_indicatrix("tantrix_bridge", k, v)


def tantrix_inflection_direct(k, v):
    return direct("tantrix_inflection", k, v)


def tantrix_inflection_via_darboux(k, v):
    return via_indicatrix("tantrix_inflection", k, v)


def evaluate_both(which, k, V):
    """Both counts and the degeneracy mask for a batch of directions.

    A direction is degenerate when any quantity either method branches on
    lies within its tolerance band. Undefined counts are -1.
    """
    which = canonical(which)
    k.require_valid()
    V, _ = _directions(V)
    d, dm = _chunked(_DIRECT[which], k, V)
    c, cm = _chunked(_VIA[which], k, V)
    eps = TOL.on_circle
    degenerate = (dm <= eps) | (cm <= eps) | (d < 0) | (c < 0)
    return d, c, degenerate


def degenerate_mask(which, k, V) -> np.ndarray:
    return evaluate_both(which, k, V)[2]


@dataclass(frozen=True)
class Direction:
    v: np.ndarray
    regular_for: frozenset


def direction(k: PolygonalKnot, v) -> Direction:
    V, _ = _directions(v)
    flags = frozenset(m for m in MAPS if not degenerate_mask(m, k, V)[0])
    return Direction(V[0], flags)


@dataclass(frozen=True)
class ProjectionClassification:
    inflection_sticks: tuple
    d_a: int | None = None
    d_b: int | None = None
    d_c: int | None = None


def classify_projection(k: PolygonalKnot, v) -> ProjectionClassification:
    k.require_valid()
    V, _ = _directions(v)
    i, ii, iii, _ = _inflection_sticks(k, V)
    sticks = (int(i[0]), int(ii[0]), int(iii[0]))
    corner, bend, rim = _turn_signs(k, V)
    eps = TOL.on_circle
    if np.all(np.abs(rim) > eps) and np.all(np.abs(bend) > eps):
        d_a, d_b, d_c = (int(x[0]) for x in _darboux_configurations(np.sign(corner), np.sign(bend)))
        return ProjectionClassification(sticks, d_a, d_b, d_c)
    return ProjectionClassification(sticks)


@dataclass
class MapSampleReport:
    map: str
    n_sticks: int
    directions: np.ndarray
    direct: np.ndarray
    indicatrix: np.ndarray
    degenerate: np.ndarray
    meta: dict = field(default_factory=dict)

    @property
    def values(self) -> np.ndarray:
        """Direct counts at the non-degenerate directions."""
        return self.direct[~self.degenerate]

    @property
    def disagreements(self) -> int:
        ok = ~self.degenerate
        return int(np.sum(self.direct[ok] != self.indicatrix[ok]))

    @property
    def degenerate_fraction(self) -> float:
        return float(np.mean(self.degenerate)) if len(self.degenerate) else 0.0

    @property
    def min(self):
        return int(self.values.min()) if len(self.values) else None

    @property
    def max(self):
        return int(self.values.max()) if len(self.values) else None

    def histogram(self) -> dict:
        vals, counts = np.unique(self.values, return_counts=True)
        return {int(a): int(b) for a, b in zip(vals, counts)}

    @property
    def upper_bound(self) -> int:
        return UPPER_BOUND_FACTOR[self.map] * self.n_sticks

    def bound_violations(self) -> int:
        """Directions where either count exceeds the map's ``n`` or ``2n`` ceiling."""
        return int(np.sum((self.direct > self.upper_bound) | (self.indicatrix > self.upper_bound)))

    def records(self):
        for v, d, c, g in zip(self.directions, self.direct, self.indicatrix, self.degenerate):
            yield {"v": v.tolist(), "direct": int(d) if d >= 0 else None,
                   "indicatrix": int(c) if c >= 0 else None, "degenerate": bool(g)}

    def to_json(self, include_samples: bool = True) -> dict:
        out = {"map": self.map, "min": self.min, "max": self.max,
               "histogram": {str(a): b for a, b in self.histogram().items()},
               "n_samples": int(len(self.directions)),
               "degenerate": int(self.degenerate.sum()),
               "disagreements": self.disagreements,
               "bound_violations": self.bound_violations(),
               "upper_bound": self.upper_bound}
        if include_samples:
            out["samples"] = list(self.records())
        return out


def sample_map(k: PolygonalKnot, which: str, directions=None, *, count: int | None = None,
               seed=None, sampler: str = "fibonacci") -> MapSampleReport:
    """Evaluate one map by both methods over a direction set.

    Without explicit ``directions`` the set is ``count`` points of the
    Fibonacci lattice, or seeded uniform samples with ``sampler="uniform"``.
    """
    which = canonical(which)
    if directions is None:
        if count is None:
            raise ValueError("give directions or a sample count")
        if sampler == "fibonacci":
            directions = fibonacci_sphere(count)
        elif sampler == "uniform":
            directions = uniform_sphere(count, seed)
        else:
            raise ValueError(f"unknown sampler {sampler!r}")
    V, _ = _directions(directions)
    d, c, deg = evaluate_both(which, k, V)
    return MapSampleReport(which, k.n, V, d, c, deg,
                           {"sampler": sampler if directions is None else "explicit", "seed": seed})
