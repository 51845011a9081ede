"""Compare the numba and numpy backends of the floating-point replica kernels.

Usage: python benchmarks/bench_kernels.py [--repeat 5] [--factors 6] [--terms 3]
"""

from __future__ import annotations

import argparse
import json
import os
import random
import time

import numpy as np

from motzkin_functionals.algebra import Element
from motzkin_functionals.replica import MatrixModel, _kernels, build_space, psi_oracle, random_model_element
from motzkin_functionals.words import enumerate_reduced

MODELS = [
    MatrixModel("A", {"x": [[1, 1, 0], [1, 0, 1], [0, 1, -1]], "y": [[0, 1, 1], [1, 1, 0], [-1, 0, 1]]}),
    MatrixModel("B", {"u": [[0, 1], [1, 1]], "v": [[1, -1], [1, 0]]}),
]


def best_of(repeat, fn):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def bench_expectation(repeat, factors, terms, sites, m):
    rng = np.random.default_rng(0)
    coefs = rng.normal(size=(factors, terms))
    mats = rng.normal(size=(factors, terms, sites, m, m)) / m
    nterms = np.full(factors, terms, dtype=np.int64)
    _kernels.expanded_expectation(coefs, mats, nterms, use="numba")  # compile
    return {
        use: best_of(repeat, lambda use=use: _kernels.expanded_expectation(coefs, mats, nterms, use=use))
        for use in ("numba", "numpy")
    }


def bench_apply(repeat, N):
    space = build_space(MODELS, N, exact=False)
    vec = np.random.default_rng(1).normal(size=space.dimension)
    mat = np.random.default_rng(2).normal(size=(3, 3))
    left, right = 1, space.dimension // 3

    def run(use):
        for _ in range(50):
            _kernels.apply_site(vec, left, 3, right, mat, use)

    run("numba")
    return {use: best_of(repeat, lambda use=use: run(use)) for use in ("numba", "numpy")}


def bench_oracle(repeat, n):
    rng = random.Random(3)
    args: list[Element] = []
    for _ in range(n):
        ch = [m for m in MODELS if not args or m.label != args[-1].label]
        args.append(random_model_element(rng, rng.choice(ch)))
    space = build_space(MODELS, (n + 1) // 2, exact=False)
    words = enumerate_reduced(n)
    out = {}
    for use in ("numba", "numpy"):
        os.environ[_kernels.BACKEND_ENV] = use
        psi_oracle(space, words[0], args)
        out[use] = best_of(repeat, lambda: [psi_oracle(space, w, args) for w in words])
    os.environ.pop(_kernels.BACKEND_ENV, None)
    return out


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--factors", type=int, default=6)
    ap.add_argument("--terms", type=int, default=3)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args(argv)
    results = {
        "expanded_expectation": bench_expectation(args.repeat, args.factors, args.terms, 8, 3),
        "apply_site x50 (N=4)": bench_apply(args.repeat, 4),
        "psi_oracle over M_7": bench_oracle(args.repeat, 7),
    }
    if args.json:
        print(json.dumps(results, indent=2))
        return 0
    print(f"{'kernel':<26}{'numba [s]':>12}{'numpy [s]':>12}{'ratio':>8}")
    for name, r in results.items():
        print(f"{name:<26}{r['numba']:>12.5f}{r['numpy']:>12.5f}{r['numpy'] / r['numba']:>8.1f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
