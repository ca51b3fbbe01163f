"""``stickmaps`` command line: generate knots, compute indicatrices and maps, verify graphs.

Every report is deterministic JSON carrying the tool version, the full run
configuration, the seed and the SHA-256 of the input knot.

Exit codes: 0 ok, 1 verification failure or method disagreement,
2 bad input, 3 more than 5% of sampled directions degenerate.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .errors import StickMapsError
from .geometry import TOL, SphericalPolygon, unit
from .graphs import crofton_length, graph_for, verify_graph
from .indicatrix import INDICATRICES, frenet_data
from .knot import PolygonalKnot, dumps, hexagonal_trefoil, loads, random_knot, torus_knot_polygon
from .maps import ALIASES, canonical, sample_map

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_DEGENERATE = 0, 1, 2, 3
DEGENERATE_BUDGET = 0.05
MAP_CHOICES = ("bridge", "inflection", "tbridge", "tinflection")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    knot: str | None = None
    gen: str | None = None
    seed: int = 0
    samples: int | None = None
    probes: int | None = None
    sampler: str = "fibonacci"
    map: str | None = None
    graph: str | None = None
    indicatrix: str | None = None
    polygon: str | None = None
    directions: list = field(default_factory=list)
    negative_control: bool = False
    tolerance_scale: float = 1.0
    out: str | None = None


def generate(spec: str) -> PolygonalKnot:
    """Build a knot from ``torus:p,q,n[,R,r]``, ``hextrefoil`` or ``random:n,seed``."""
    kind, _, rest = spec.partition(":")
    args = [a.split("=")[-1].strip() for a in rest.split(",")] if rest else []
    try:
        if kind == "hextrefoil" and not args:
            return hexagonal_trefoil()
        if kind == "torus" and len(args) in (3, 5):
            p, q, n = (int(a) for a in args[:3])
            R, r = (float(a) for a in args[3:]) if len(args) == 5 else (2.0, 1.0)
            return torus_knot_polygon(p, q, n, R, r)
        if kind == "random" and len(args) == 2:
            return random_knot(int(args[0]), int(args[1]))
    except ValueError as exc:
        if isinstance(exc, StickMapsError):
            raise
        raise UsageError(f"bad generator spec {spec!r}: {exc}") from exc
    raise UsageError(f"bad generator spec {spec!r}; expected torus:p,q,n,R,r | hextrefoil | random:n,seed")


def _load_knot(cfg: RunConfig):
    if bool(cfg.knot) == bool(cfg.gen):
        raise UsageError("give exactly one of --knot PATH or --gen SPEC")
    if cfg.knot:
        try:
            text = Path(cfg.knot).read_text()
        except OSError as exc:
            raise UsageError(f"cannot read {cfg.knot}: {exc}") from exc
        k = loads(text)
    else:
        k = generate(cfg.gen).require_valid()
        text = dumps(k)
    return k, hashlib.sha256(text.encode()).hexdigest()


def _parse_direction(text: str):
    try:
        v = np.array([float(x) for x in text.split(",")])
    except ValueError as exc:
        raise UsageError(f"bad direction {text!r}") from exc
    if v.shape != (3,) or not np.linalg.norm(v) > 0:
        raise UsageError(f"direction must be three numbers, not all zero: {text!r}")
    return unit(v)


def _envelope(cfg: RunConfig, sha: str | None, result: dict) -> dict:
    return {"tool": "stickmaps", "version": __version__, "config": asdict(cfg),
            "seed": cfg.seed, "input_sha256": sha, "result": result}


def cmd_gen(cfg):
    k = generate(cfg.gen).require_valid()
    return dumps(k), EXIT_OK


def cmd_indicatrix(cfg):
    k, sha = _load_knot(cfg)
    names = list(INDICATRICES) if cfg.indicatrix in (None, "all") else [cfg.indicatrix]
    out = {}
    for name in names:
        p = INDICATRICES[name](k)
        out[name] = {**p.to_json(), "length": p.length(), "n_vertices": len(p)}
    result = {"indicatrices": out, "frenet": frenet_data(k).to_json()}
    return _envelope(cfg, sha, result), EXIT_OK


def cmd_map(cfg):
    k, sha = _load_knot(cfg)
    if cfg.directions:
        V = np.array([_parse_direction(d) for d in cfg.directions])
        rep = sample_map(k, cfg.map, V)
    else:
        rep = sample_map(k, cfg.map, count=cfg.samples or 10_000, seed=cfg.seed,
                         sampler=cfg.sampler)
    code = EXIT_OK
    if rep.disagreements or rep.bound_violations():
        code = EXIT_FAIL
    elif rep.degenerate_fraction > DEGENERATE_BUDGET:
        code = EXIT_DEGENERATE
    return _envelope(cfg, sha, rep.to_json()), code


def cmd_verify(cfg):
    k, sha = _load_knot(cfg)
    verdict = verify_graph(k, cfg.graph, pairs=cfg.samples or 10_000, probes=cfg.probes or 1_000,
                           seed=cfg.seed, negative_control=cfg.negative_control)
    result = {"verdict": verdict.to_json(), "graph": graph_for(cfg.graph, k).to_json()}
    return _envelope(cfg, sha, result), EXIT_OK if verdict.ok else EXIT_FAIL


def cmd_crofton(cfg):
    n = 100_000 if cfg.samples is None else cfg.samples
    if n <= 0:
        raise UsageError("--samples must be positive")
    if cfg.polygon:
        if cfg.knot or cfg.gen:
            raise UsageError("give --polygon or a knot, not both")
        try:
            text = Path(cfg.polygon).read_text()
            p = SphericalPolygon.from_json(json.loads(text))
        except (OSError, KeyError, TypeError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read polygon {cfg.polygon}: {exc}") from exc
        sha = hashlib.sha256(text.encode()).hexdigest()
    else:
        k, sha = _load_knot(cfg)
        p = INDICATRICES[cfg.indicatrix or "tantrix"](k)
    return _envelope(cfg, sha, crofton_length(p, n, cfg.seed).to_json()), EXIT_OK


COMMANDS = {"gen": cmd_gen, "indicatrix": cmd_indicatrix, "map": cmd_map,
            "verify": cmd_verify, "crofton": cmd_crofton}


def _seed(text: str) -> int:
    s = int(text)
    if not 0 <= s < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return s


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="stickmaps", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"stickmaps {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, knot=True):
        if knot:
            src = p.add_mutually_exclusive_group()
            src.add_argument("--knot", metavar="PATH", help="knot JSON file")
            src.add_argument("--gen", metavar="SPEC",
                             help="torus:p,q,n,R,r | hextrefoil | random:n,seed")
        p.add_argument("--seed", type=_seed, default=0)
        p.add_argument("--out", metavar="PATH", help="write here instead of stdout")
        p.add_argument("--tolerance-scale", type=float, default=1.0, metavar="X",
                       help="multiply every numerical tolerance (result must stay in [1e-12, 1e-4])")

    g = sub.add_parser("gen", help="write a generated knot as JSON")
    g.add_argument("--gen", metavar="SPEC", required=True)
    common(g, knot=False)

    p = sub.add_parser("indicatrix", help="indicatrix polygons and Frenet summary")
    common(p)
    p.add_argument("--indicatrix", choices=[*INDICATRICES, "all"], default="all")

    p = sub.add_parser("map", help="evaluate a map by both methods over many directions")
    common(p)
    p.add_argument("--map", choices=MAP_CHOICES, required=True)
    p.add_argument("--samples", type=int)
    p.add_argument("--sampler", choices=("fibonacci", "uniform"), default="fibonacci")
    p.add_argument("--direction", action="append", default=[], metavar="X,Y,Z", dest="directions")

    p = sub.add_parser("verify", help="sample-check a graph theorem")
    common(p)
    p.add_argument("--graph", choices=MAP_CHOICES, required=True)
    p.add_argument("--samples", type=int, help="constancy pairs (default 10000)")
    p.add_argument("--probes", type=int, help="crossing probes (default 1000)")
    p.add_argument("--negative-control", action="store_true",
                   help="check against the counted indicatrix instead; expected to fail")

    p = sub.add_parser("crofton", help="Monte Carlo length of a polygon from random great circles")
    common(p)
    p.add_argument("--polygon", metavar="PATH", help="spherical polygon JSON")
    p.add_argument("--indicatrix", choices=list(INDICATRICES))
    p.add_argument("--samples", type=int)
    return ap


def _emit(payload, out):
    text = payload if isinstance(payload, str) else json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(**{k: v for k, v in vars(args).items() if k in RunConfig.__dataclass_fields__})
    for name in ("map", "graph"):
        if getattr(cfg, name):
            setattr(cfg, name, canonical(ALIASES.get(getattr(cfg, name), getattr(cfg, name))))
    try:
        with TOL.scaled(cfg.tolerance_scale):
            payload, code = COMMANDS[cfg.command](cfg)
    except (UsageError, StickMapsError, ValueError) as exc:
        print(f"stickmaps: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    _emit(payload, cfg.out)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
