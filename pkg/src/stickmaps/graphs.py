"""Graphs on S^2 whose complementary regions carry constant map values.

Each map is constant off its graph, and stepping across one arc of the
graph changes the value by a fixed amount. :func:`verify_graph` checks both
claims by sampling; :func:`crofton_length` estimates polygon lengths from
random great-circle intersection counts.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .geometry import SphericalPolygon, angle_between, arcs_cross, crossing_counts, unit
from .indicatrix import INDICATRICES, binotrix, darboux, notrix, tantrix, torsion_angles
from .knot import PolygonalKnot
from .maps import INDICATRIX_OF, canonical, evaluate_both
from .sampling import tangent_basis, uniform_sphere

DELTA_PAIR = 0.05
DELTA_CROSS = 1e-4
DELTA_END = 1e-3
TOUCH_TOL = 1e-7


@dataclass(frozen=True)
class GraphCurve:
    """A finite set of shorter great-circle arcs, each tagged with where it came from."""

    starts: np.ndarray
    ends: np.ndarray
    provenance: tuple

    def __post_init__(self):
        for name in ("starts", "ends"):
            a = np.array(getattr(self, name), dtype=float).reshape(-1, 3)
            a.setflags(write=False)
            object.__setattr__(self, name, a)
        object.__setattr__(self, "provenance", tuple(self.provenance))
        if not len(self.starts) == len(self.ends) == len(self.provenance):
            raise ValueError("starts, ends and provenance must have equal length")

    def __len__(self):
        return len(self.starts)

    def lengths(self) -> np.ndarray:
        return angle_between(self.starts, self.ends)

    def length(self) -> float:
        return float(self.lengths().sum())

    def poles(self) -> np.ndarray:
        return unit(np.cross(self.starts, self.ends))

    def __add__(self, other: "GraphCurve") -> "GraphCurve":
        return GraphCurve(np.vstack([self.starts, other.starts]),
                          np.vstack([self.ends, other.ends]),
                          self.provenance + other.provenance)

    def antipodal_closure(self) -> "GraphCurve":
        anti = tuple(_anti(p) for p in self.provenance)
        return self + GraphCurve(-self.starts, -self.ends, anti)

    def to_json(self) -> dict:
        return {"arcs": [{"start": s.tolist(), "end": e.tolist(), "provenance": p}
                         for s, e, p in zip(self.starts, self.ends, self.provenance)]}

    @classmethod
    def from_json(cls, data: dict) -> "GraphCurve":
        arcs = data["arcs"]
        return cls([a["start"] for a in arcs], [a["end"] for a in arcs],
                   [a["provenance"] for a in arcs])

    @classmethod
    def from_polygon(cls, p: SphericalPolygon, label: str) -> "GraphCurve":
        v = p.vertices
        return cls(v, np.roll(v, -1, axis=0), [f"{label}[{i}]" for i in range(len(v))])


def _anti(label: str) -> str:
    parts = label.split("-")
    out = []
    i = 0
    while i < len(parts):  # flip every endpoint tag between "x" and "anti-x"
        if parts[i] == "anti":
            out.append(parts[i + 1])
            i += 2
        else:
            out.append("anti-" + parts[i])
            i += 1
    return "-".join(out)


def _tag(name: str, i: int, sign: float) -> str:
    return f"{name}[{i}]" if sign > 0 else f"anti-{name}[{i}]"


def _connect(points, names) -> GraphCurve:
    """Closed chain through ``points`` with labels ``"a-b"`` from per-vertex tags."""
    n = len(points)
    return GraphCurve(points, np.roll(points, -1, axis=0),
                      [f"{names[i]}-{names[(i + 1) % n]}" for i in range(n)])


def bridge_graph(k: PolygonalKnot) -> GraphCurve:
    """Binotrix together with its antipodal image."""
    return GraphCurve.from_polygon(binotrix(k), "binotrix").antipodal_closure()


def inflection_graph(k: PolygonalKnot) -> GraphCurve:
    """Arcs joining consecutive tantrix vertices, flipped where the torsion sign changes.

    ``T[i]`` is joined to ``T[i+1]`` when edges ``i`` and ``i+1`` twist the
    same way and to ``-T[i+1]`` otherwise; the antipodal copy is included.
    """
    T = tantrix(k).vertices
    sigma = np.sign(torsion_angles(k))
    W = sigma[:, None] * T
    names = [_tag("tantrix", i, s) for i, s in enumerate(sigma)]
    return _connect(W, names).antipodal_closure()


def tantrix_bridge_graph(k: PolygonalKnot) -> GraphCurve:
    """Darboux indicatrix together with its antipodal image."""
    return GraphCurve.from_polygon(darboux(k), "darboux").antipodal_closure()


def tantrix_inflection_graph(k: PolygonalKnot) -> GraphCurve:
    """Chain through signed notrix vertices, closed up antipodally.

    The chain visits ``-sigma[i+1] N[2i+1]`` then ``sigma[i+1] N[2i+2]``
    for each ``i``, where ``sigma`` is the torsion sign.
    """
    N = notrix(k).vertices
    sigma_next = np.roll(np.sign(torsion_angles(k)), -1)
    n = len(sigma_next)
    W = np.empty((2 * n, 3))
    names = []
    for i in range(n):
        a, b = 2 * i + 1, (2 * i + 2) % (2 * n)
        W[2 * i] = -sigma_next[i] * N[a]
        W[2 * i + 1] = sigma_next[i] * N[b]
        names += [_tag("notrix", a, -sigma_next[i]), _tag("notrix", b, sigma_next[i])]
    return _connect(W, names).antipodal_closure()


GRAPHS = {"bridge": bridge_graph, "inflection": inflection_graph,
          "tantrix_bridge": tantrix_bridge_graph, "tantrix_inflection": tantrix_inflection_graph}


def graph_for(which: str, k: PolygonalKnot) -> GraphCurve:
    return GRAPHS[canonical(which)](k)


def negative_control_curve(which: str, k: PolygonalKnot) -> GraphCurve:
    """The counted indicatrix itself: crossing it generally leaves the map unchanged."""
    name = INDICATRIX_OF[canonical(which)]
    return GraphCurve.from_polygon(INDICATRICES[name](k), name)


def allowed_delta(which: str, delta: int) -> bool:
    if canonical(which) == "tantrix_inflection":
        return delta != 0 and delta % 2 == 0
    return abs(delta) == 2


@dataclass
class RegionVerdict:
    map: str
    graph_arcs: int
    constancy_pairs: int
    constancy_violations: int
    probes: int
    probe_violations: int
    deltas: dict
    skipped: dict
    examples: list = field(default_factory=list)
    negative_control: bool = False

    @property
    def violations(self) -> int:
        return self.constancy_violations + self.probe_violations

    @property
    def ok(self) -> bool:
        return self.violations == 0

    def to_json(self) -> dict:
        return {"map": self.map, "graph_arcs": self.graph_arcs, "ok": self.ok,
                "negative_control": self.negative_control,
                "constancy_pairs": self.constancy_pairs,
                "constancy_violations": self.constancy_violations,
                "probes": self.probes, "probe_violations": self.probe_violations,
                "deltas": {str(a): b for a, b in sorted(self.deltas.items())},
                "skipped": dict(self.skipped), "examples": self.examples}


def _rotate_towards(p, t, angle):
    return unit(np.cos(angle)[:, None] * p + np.sin(angle)[:, None] * t)


def _values(which, k, V):
    d, _, deg = evaluate_both(which, k, V)
    return d, deg


def _hits(graph, p, q, chunk=2048):
    return np.concatenate([arcs_cross(p[i:i + chunk], q[i:i + chunk], graph.starts, graph.ends,
                                      TOUCH_TOL).sum(axis=1)
                           for i in range(0, len(p), chunk)] or [np.zeros(0, int)])


def verify_graph(k: PolygonalKnot, which: str, graph: GraphCurve | None = None, *,
                 pairs: int = 10_000, probes: int = 1_000, seed=0,
                 negative_control: bool = False, max_rounds: int = 50) -> RegionVerdict:
    """Sample-check that ``which`` is constant off ``graph`` and jumps correctly across it.

    Constancy: random pairs at most ``DELTA_PAIR`` apart whose joining arc
    meets no graph arc must share the map value. Crossing: points ``DELTA_CROSS``
    either side of a random interior point of a graph arc, whose joining arc
    meets only that graph arc, must differ by the allowed jump. Degenerate
    evaluations are skipped and tallied. With ``negative_control`` the
    counted indicatrix stands in for the graph, and the check should fail.
    """
    which = canonical(which)
    if graph is None:
        graph = negative_control_curve(which, k) if negative_control else graph_for(which, k)
    rng = np.random.default_rng(seed)
    skipped = {"pair_crosses_graph": 0, "pair_degenerate": 0,
               "probe_multiple_arcs": 0, "probe_degenerate": 0, "probe_short_arc": 0}
    examples = []

    done, bad_pairs = 0, 0
    for _ in range(max_rounds):
        if done >= pairs:
            break
        m = 2 * (pairs - done) + 64
        p = uniform_sphere(m, rng=rng)
        e1, e2 = tangent_basis(p)
        phi = rng.uniform(0, 2 * np.pi, m)
        t = np.cos(phi)[:, None] * e1 + np.sin(phi)[:, None] * e2
        q = _rotate_towards(p, t, rng.uniform(0, DELTA_PAIR, m))
        clear = _hits(graph, p, q) == 0
        skipped["pair_crosses_graph"] += int(np.sum(~clear))
        p, q = p[clear], q[clear]
        fp, dp = _values(which, k, p)
        fq, dq = _values(which, k, q)
        good = ~(dp | dq)
        skipped["pair_degenerate"] += int(np.sum(~good))
        idx = np.flatnonzero(good)[: pairs - done]
        wrong = idx[fp[idx] != fq[idx]]
        bad_pairs += len(wrong)
        for i in wrong[: max(0, 5 - len(examples))]:
            examples.append({"kind": "constancy", "p": p[i].tolist(), "q": q[i].tolist(),
                             "values": [int(fp[i]), int(fq[i])]})
        done += len(idx)

    lengths = graph.lengths()
    usable = lengths > 2 * DELTA_END
    weights = np.where(usable, lengths, 0.0)
    weights = weights / weights.sum()
    poles = graph.poles()
    got, bad_probes, deltas = 0, 0, {}
    for _ in range(max_rounds):
        if got >= probes:
            break
        m = 2 * (probes - got) + 64
        j = rng.choice(len(graph), size=m, p=weights)
        s = rng.uniform(DELTA_END, lengths[j] - DELTA_END)
        a = graph.starts[j]
        tdir = unit(graph.ends[j] - np.einsum("ij,ij->i", graph.ends[j], a)[:, None] * a)
        x = np.cos(s)[:, None] * a + np.sin(s)[:, None] * tdir
        left = _rotate_towards(x, poles[j], np.full(m, DELTA_CROSS))
        right = _rotate_towards(x, -poles[j], np.full(m, DELTA_CROSS))
        single = _hits(graph, right, left) == 1
        skipped["probe_multiple_arcs"] += int(np.sum(~single))
        j, left, right = j[single], left[single], right[single]
        fl, dl = _values(which, k, left)
        fr, dr = _values(which, k, right)
        good = ~(dl | dr)
        skipped["probe_degenerate"] += int(np.sum(~good))
        idx = np.flatnonzero(good)[: probes - got]
        for i in idx:
            delta = int(fl[i] - fr[i])
            deltas[delta] = deltas.get(delta, 0) + 1
            if not allowed_delta(which, delta):
                bad_probes += 1
                if len(examples) < 10:
                    examples.append({"kind": "crossing", "arc": graph.provenance[j[i]],
                                     "left": left[i].tolist(), "right": right[i].tolist(),
                                     "values": [int(fl[i]), int(fr[i])]})
        got += len(idx)
    skipped["probe_short_arc"] = int(np.sum(~usable))

    return RegionVerdict(which, len(graph), done, bad_pairs, got, bad_probes, deltas,
                         skipped, examples, negative_control)


def self_intersections(graph: GraphCurve, tol: float = 1e-9):
    """Transversal crossings between arcs that do not share an endpoint.

    Returns ``(i, j, point)`` triples with ``i < j``.
    """
    hit = arcs_cross(graph.starts, graph.ends, graph.starts, graph.ends, -tol)
    out = []
    poles = graph.poles()
    for i, j in zip(*np.nonzero(np.triu(hit, k=1))):
        ends = np.vstack([graph.starts[[i, j]], graph.ends[[i, j]]])
        shared = np.min(np.linalg.norm(ends[[0, 2]][:, None] - ends[[1, 3]][None], axis=-1))
        if shared < 1e-6:
            continue
        x = unit(np.cross(poles[i], poles[j]))
        mid_i = unit(graph.starts[i] + graph.ends[i])
        x = x if x @ mid_i > 0 else -x
        out.append((int(i), int(j), x))
    return out


@dataclass(frozen=True)
class CroftonEstimate:
    estimate: float
    stderr: float
    exact: float
    n: int
    seed: object = None

    @property
    def deviation(self) -> float:
        return self.estimate - self.exact

    @property
    def z(self) -> float:
        if self.stderr == 0:
            return 0.0 if self.deviation == 0 else float(np.sign(self.deviation) * np.inf)
        return self.deviation / self.stderr

    def to_json(self) -> dict:
        return {"estimate": self.estimate, "stderr": self.stderr, "exact": self.exact,
                "n": self.n, "seed": self.seed, "z": self.z}


def crofton_length(p: SphericalPolygon, n: int, seed=None) -> CroftonEstimate:
    """Length of ``p`` as ``pi`` times the mean number of crossings with random great circles."""
    if n <= 0:
        raise ValueError("need at least one random circle")
    poles = uniform_sphere(n, seed)
    counts = np.concatenate([crossing_counts(p.vertices, poles[i:i + 8192])
                             for i in range(0, n, 8192)])
    std = float(np.std(counts, ddof=1)) if n > 1 else 0.0
    return CroftonEstimate(float(np.pi * counts.mean()), float(np.pi * std / np.sqrt(n)),
                           p.length(), n, seed)
