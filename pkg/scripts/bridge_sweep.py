"""Sweep all four maps over a Fibonacci lattice and print range, histogram and agreement.

Usage: python3 scripts/bridge_sweep.py [--gen hextrefoil] [--samples 100000]
"""
import argparse
import json

from stickmaps.cli import generate
from stickmaps.maps import MAPS, sample_map


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--gen", default="hextrefoil", help="generator spec, as for the CLI")
    ap.add_argument("--samples", type=int, default=100_000)
    args = ap.parse_args()
    k = generate(args.gen).require_valid()
    rows = {}
    for which in MAPS:
        rep = sample_map(k, which, count=args.samples)
        rows[which] = {key: rep.to_json(include_samples=False)[key]
                       for key in ("min", "max", "histogram", "degenerate", "disagreements", "upper_bound")}
    print(json.dumps({"knot": args.gen, "n": k.n, "samples": args.samples, "maps": rows}, indent=2))


if __name__ == "__main__":
    main()
