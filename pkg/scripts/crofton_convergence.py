"""Crofton length estimates of the tantrix and binotrix against their exact lengths.

Prints z-scores as the number of random circles grows, then the 30-seed
mean deviation at the largest size.

Usage: python3 scripts/crofton_convergence.py [--gen torus:2,3,60,2,1]
"""
import argparse

import numpy as np

from stickmaps.cli import generate
from stickmaps.graphs import crofton_length
from stickmaps.indicatrix import binotrix, tantrix


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--gen", default="torus:2,3,60,2,1")
    ap.add_argument("--seeds", type=int, default=30)
    ap.add_argument("--max-n", type=int, default=100_000)
    args = ap.parse_args()
    k = generate(args.gen).require_valid()
    for name, f in (("tantrix", tantrix), ("binotrix", binotrix)):
        p = f(k)
        print(f"{name}: exact length {p.length():.6f}")
        n = 1000
        while n <= args.max_n:
            est = crofton_length(p, n, seed=0)
            print(f"  n={n:>8d}  estimate {est.estimate:.6f} +- {est.stderr:.6f}  z {est.z:+.2f}")
            n *= 10
        runs = [crofton_length(p, args.max_n, seed=s) for s in range(args.seeds)]
        dev = np.mean([r.deviation for r in runs])
        sem = np.sqrt(np.mean([r.stderr ** 2 for r in runs])) / np.sqrt(args.seeds)
        print(f"  {args.seeds} seeds: mean deviation {dev:+.2e}, stderr of mean {sem:.2e}, ratio {dev / sem:+.2f}")


if __name__ == "__main__":
    main()
