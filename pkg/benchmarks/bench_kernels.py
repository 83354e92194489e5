"""Compare the compiled and pure-Python Fock kernels on identical inputs.

Usage: python benchmarks/bench_kernels.py [--modes 16] [--particles 4] [--repeat 5]
"""

import argparse
import itertools
import time

import numpy as np

from bogofock.fock import kernels
from bogofock.fock.vector import modes_to_key


def random_state(n_modes, n_particles, n_terms, rng):
    pool = list(itertools.combinations(range(n_modes), n_particles))
    picks = rng.choice(len(pool), size=min(n_terms, len(pool)), replace=False)
    keys = np.array([modes_to_key(pool[i]) for i in picks], dtype=np.uint64)
    amps = rng.normal(size=len(keys)) + 1j * rng.normal(size=len(keys))
    order = np.argsort(keys)
    return keys[order], amps[order]


def timed(func, repeat):
    best = float("inf")
    result = None
    for _ in range(repeat):
        start = time.perf_counter()
        result = func()
        best = min(best, time.perf_counter() - start)
    return best, result


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--modes", type=int, default=16)
    parser.add_argument("--particles", type=int, default=4)
    parser.add_argument("--terms", type=int, default=400)
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--seed", type=int, default=42)
    args = parser.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    n = args.modes
    keys, amps = random_state(n, args.particles, args.terms, rng)
    modes = np.arange(n)
    coefs = rng.normal(size=n) + 1j * rng.normal(size=n)
    ps, qs = np.nonzero(np.triu(np.ones((n, n)), 1))
    pair_coefs = rng.normal(size=len(ps)) + 1j * rng.normal(size=len(ps))
    dense = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    colptr = np.arange(0, n * n + 1, n)
    rowind = np.tile(np.arange(n), n)
    vals = dense.T.reshape(-1)

    cases = {
        "create (one-body)": lambda b: kernels.one_body(keys, amps, modes, coefs, True, backend=b),
        "pair annihilate": lambda b: kernels.pair(keys, amps, ps, qs, pair_coefs, False, backend=b),
        "pair create": lambda b: kernels.pair(keys, amps, ps, qs, pair_coefs, True, backend=b),
        "lift (dense one-particle map)": lambda b: kernels.lift(keys, amps, colptr, rowind, vals, backend=b),
    }
    try:
        kernels.get_backend("cython")
        backends = ["python", "cython"]
    except ImportError:
        print("compiled extension not available; timing the pure-Python kernels only")
        backends = ["python"]

    print(f"{args.terms} states, {args.particles} particles on {n} modes, best of {args.repeat}")
    print(f"{'kernel':<32}" + "".join(f"{b:>12}" for b in backends) + ("     speedup   max diff" if len(backends) == 2 else ""))
    for name, case in cases.items():
        times, results = [], []
        for b in backends:
            t, r = timed(lambda: case(b), args.repeat)
            times.append(t)
            results.append(r)
        line = f"{name:<32}" + "".join(f"{t * 1e3:>10.2f}ms" for t in times)
        if len(backends) == 2:
            (k0, a0), (k1, a1) = results
            diff = float(np.max(np.abs(a0 - a1))) if np.array_equal(k0, k1) else float("inf")
            line += f"  {times[0] / times[1]:>9.1f}x  {diff:.1e}"
        print(line)


if __name__ == "__main__":
    main()
