"""Polygonal knot conformations: validation, generators and JSON files."""
from __future__ import annotations

import functools
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple

import numpy as np

from .errors import GenerationFailed, ParseError, TooFewVertices, ValidationError
from .geometry import TOL, angle_between


class Violation(NamedTuple):
    rule: str
    indices: tuple
    magnitude: float


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def rules(self) -> set:
        return {v.rule for v in self.violations}

    def to_json(self) -> dict:
        return {"ok": self.ok,
                "violations": [{"rule": v.rule, "indices": list(v.indices),
                                "magnitude": v.magnitude} for v in self.violations]}


@dataclass(frozen=True, eq=False)
class PolygonalKnot:
    """Closed polygon ``X_0 ... X_{n-1}``; indices are taken mod n.

    Construction does not check general position; call :func:`validate`
    or :meth:`require_valid`.
    """

    vertices: np.ndarray
    name: str | None = None

    def __post_init__(self):
        v = np.array(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 3:
            raise ValueError("vertices must be an (n, 3) array")
        if not np.all(np.isfinite(v)):
            raise ValueError("vertex coordinates must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)

    @property
    def n(self) -> int:
        return len(self.vertices)

    def edges(self) -> np.ndarray:
        """Row ``i`` is the edge vector ``X_i - X_{i-1}``."""
        return self.vertices - np.roll(self.vertices, 1, axis=0)

    @functools.cached_property
    def report(self) -> ValidationReport:
        return validate(self)

    def require_valid(self) -> "PolygonalKnot":
        if not self.report.ok:
            raise ValidationError(self.report)
        return self

    def transformed(self, rotation=None, translation=None, scale=1.0) -> "PolygonalKnot":
        v = self.vertices * scale
        if rotation is not None:
            v = v @ np.asarray(rotation, float).T
        if translation is not None:
            v = v + np.asarray(translation, float)
        return PolygonalKnot(v, self.name)

    def reversed(self) -> "PolygonalKnot":
        return PolygonalKnot(self.vertices[::-1], self.name)


def _cross_norms(u):
    """|u_i x u_j| for all pairs i < j, as a list of (i, j, value)."""
    c = np.linalg.norm(np.cross(u[:, None, :], u[None, :, :]), axis=-1)
    i, j = np.triu_indices(len(u), k=1)
    return i, j, c[i, j]


def validate(k: PolygonalKnot) -> ValidationReport:
    """Check the general-position rules; magnitudes are the measured quantities."""
    n = k.n
    if n < 4:
        raise TooFewVertices(f"a knot conformation needs at least 4 vertices, got {n}")
    X = k.vertices
    out = []
    e = k.edges()
    lengths = np.linalg.norm(e, axis=1)
    eps_edge = TOL.edge * max(1.0, float(np.max(np.abs(X))))
    for i in np.flatnonzero(lengths <= eps_edge):
        out.append(Violation("degenerate_edge", ((i - 1) % n, int(i)), float(lengths[i])))
    if out:
        return ValidationReport(out)

    eps = TOL.general_position
    T = e / lengths[:, None]
    # windows X_{i-1}, X_i, X_{i+1}, X_{i+2} use edges T_i, T_{i+1}, T_{i+2}
    vol = np.abs(np.einsum("ij,ij->i", np.cross(T, np.roll(T, -1, axis=0)), np.roll(T, -2, axis=0)))
    for i in np.flatnonzero(vol <= eps):
        out.append(Violation("coplanar_vertices", tuple((int(i) + d) % n for d in (-1, 0, 1, 2)),
                             float(vol[i])))

    i, j, c = _cross_norms(T)
    bad = c <= eps
    for a, b, m in zip(i[bad], j[bad], c[bad]):
        out.append(Violation("parallel_edges", (int(a), int(b)), float(m)))

    Bt = np.cross(T, np.roll(T, -1, axis=0))
    bn = np.linalg.norm(Bt, axis=1)
    if np.all(bn > eps):
        B = Bt / bn[:, None]
        i, j, c = _cross_norms(B)
        bad = c <= eps
        for a, b, m in zip(i[bad], j[bad], c[bad]):
            out.append(Violation("parallel_osculating_planes", (int(a), int(b)), float(m)))
    return ValidationReport(out)


def turning_angles(k: PolygonalKnot) -> np.ndarray:
    """Angle ``theta_i`` between ``X_i - X_{i-1}`` and ``X_{i+1} - X_i``.

    Needs only non-degenerate edges, not general position.
    """
    e = k.edges()
    return angle_between(e, np.roll(e, -1, axis=0))


def total_curvature(k: PolygonalKnot) -> float:
    return float(np.sum(turning_angles(k)))


_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def torus_knot_polygon(p: int, q: int, n: int, R: float = 2.0, r: float = 1.0, *,
                       validate: bool = True, max_retries: int = 64) -> PolygonalKnot:
    """Sample the (p, q) torus knot at ``n`` equally spaced parameters.

    The curve winds ``p`` times around the z axis and ``q`` times around
    the core circle. If the first sampling is not in general position the
    phase is advanced by fixed golden-ratio steps of the sample spacing.
    With ``validate=False`` the raw sampling is returned unchecked.
    """
    if math.gcd(p, q) != 1:
        raise ValueError(f"gcd({p}, {q}) must be 1")
    if validate and n < 3 * max(p, q):
        raise ValueError("need n >= 3 * max(p, q)")
    if not R > r > 0:
        raise ValueError("need R > r > 0")
    step = 2 * math.pi / n
    for attempt in range(max_retries if validate else 1):
        phase = step * ((attempt * _GOLDEN) % 1.0) if attempt else 0.0
        t = step * np.arange(n) + phase
        rad = R + r * np.cos(q * t)
        X = np.column_stack([rad * np.cos(p * t), rad * np.sin(p * t), r * np.sin(q * t)])
        k = PolygonalKnot(X, f"torus({p},{q},{n})")
        if not validate or k.report.ok:
            return k
    raise GenerationFailed(f"torus({p},{q},{n}) not in general position after {max_retries} phases")


def circle_polygon(n: int, radius: float = 1.0) -> PolygonalKnot:
    """Regular planar n-gon; deliberately fails the coplanarity rule."""
    t = 2 * math.pi * np.arange(n) / n
    return PolygonalKnot(np.column_stack([radius * np.cos(t), radius * np.sin(t), np.zeros(n)]),
                         f"circle({n})")


# Six sticks on a perturbed (2,3) torus-knot pattern, found by
# scripts/find_hexagonal_trefoil.py --seed 0 (general position, 9 Fox
# 3-colorings, total curvature above 4 pi, bridge map range [4, 6]).
_HEX_TREFOIL = [
    [0.302518, 1.432043, 1.37901],
    [-2.598748, -0.688657, -1.167675],
    [1.137888, -1.0527, 1.173462],
    [0.522341, 2.558643, -1.712029],
    [-1.350978, -0.575727, 1.253435],
    [1.820927, -1.856993, -1.30153],
]


def hexagonal_trefoil() -> PolygonalKnot:
    return PolygonalKnot(_HEX_TREFOIL, "hexagonal_trefoil")


def quadrilateral() -> PolygonalKnot:
    """The 4-stick fixture Q used throughout the tests."""
    return PolygonalKnot([[0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 1]], "Q")


def random_knot(n: int, seed: int, max_retries: int = 1000) -> PolygonalKnot:
    """Uniform random vertices in the unit cube, resampled until in general position."""
    if n < 4:
        raise TooFewVertices(f"need n >= 4, got {n}")
    rng = np.random.default_rng(seed)
    for _ in range(max_retries):
        k = PolygonalKnot(rng.uniform(-1.0, 1.0, size=(n, 3)), f"random({n},{seed})")
        if k.report.ok:
            return k
    raise GenerationFailed(f"no general-position random knot with n={n} after {max_retries} draws")


def dumps(k: PolygonalKnot) -> str:
    rows = ",\n    ".join("[" + ", ".join(format(float(c), ".17g") for c in row) + "]"
                          for row in k.vertices)
    head = f'  "name": {json.dumps(k.name)},\n' if k.name is not None else ""
    return "{\n" + head + '  "vertices": [\n    ' + rows + "\n  ]\n}\n"


def save(k: PolygonalKnot, path) -> None:
    Path(path).write_text(dumps(k))


def loads(text: str, *, check: bool = True) -> PolygonalKnot:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(data, dict) or "vertices" not in data:
        raise ParseError('expected an object with a "vertices" field')
    verts = data["vertices"]
    if not isinstance(verts, list):
        raise ParseError('"vertices" must be a list')
    for i, row in enumerate(verts):
        if not isinstance(row, list) or len(row) != 3:
            got = len(row) if isinstance(row, list) else type(row).__name__
            raise ParseError(f"vertices[{i}]: expected 3 coordinates, got {got}")
        for j, c in enumerate(row):
            if isinstance(c, bool) or not isinstance(c, (int, float)):
                raise ParseError(f"vertices[{i}][{j}]: expected a number, got {c!r}")
    name = data.get("name")
    try:
        k = PolygonalKnot(np.array(verts, dtype=float).reshape(-1, 3), name)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc
    if check:
        if k.n < 4:
            raise ParseError(f"a knot needs at least 4 vertices, got {k.n}")
        k.require_valid()
    return k


def load(path, *, check: bool = True) -> PolygonalKnot:
    return loads(Path(path).read_text(), check=check)
