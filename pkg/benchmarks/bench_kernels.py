"""Benchmark the pure-Python kernels against the compiled extension.

Runs the four hot kernels on random int-encoded automata of growing
size, plus the end-to-end hypercube counting pipeline under each
backend, and prints a timing table.

    python3 benchmarks/bench_kernels.py [--seed N] [--repeat N]
"""

from __future__ import annotations

import argparse
import random
import statistics
import subprocess
import sys
import time

from oddmc import _kernels_py

try:
    from oddmc import _kernels
except ImportError:
    _kernels = None


def random_nfa(rng: random.Random, n_states: int, n_syms: int, n_trans: int):
    trans = sorted({
        (rng.randrange(n_states), rng.randrange(n_syms), rng.randrange(n_states))
        for _ in range(n_trans)
    })
    init = sorted(rng.sample(range(n_states), max(1, n_states // 8)))
    fin = sorted(rng.sample(range(n_states), max(1, n_states // 6)))
    return trans, init, fin


def bench(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return statistics.median(times)


def kernel_cases(rng: random.Random):
    small = random_nfa(rng, 40, 6, 300)
    big_a = random_nfa(rng, 150, 8, 1800)
    big_b = random_nfa(rng, 150, 8, 1800)
    dense = random_nfa(rng, 60, 4, 900)
    return [
        ("intersect 150x150", lambda k: k.intersect(*big_a, *big_b)),
        ("difference 150-150", lambda k: k.difference(*big_a, *big_b)),
        ("determinize 60/900", lambda k: k.determinize(*dense)),
        ("shortest 150", lambda k: k.shortest_accepted(*big_a)),
        ("count len=400", lambda k: k.count_paths(40, small[0], small[1], small[2], 400)),
    ]


def bench_pipeline(backend: str) -> float:
    """End-to-end hypercube count in a subprocess pinned to a backend."""
    code = (
        "import time\n"
        "from oddmc import hypercube_tuple, parse_formula, count_assignments\n"
        "from oddmc.structural import HYPERCUBE_VOCABULARY as V\n"
        "f = parse_formula('exists z. E(x,z) & E(z,y)', V)\n"
        "t0 = time.perf_counter()\n"
        "count_assignments(hypercube_tuple(48), f, ['x', 'y'])\n"
        "print(time.perf_counter() - t0)\n"
    )
    out = subprocess.run(
        [sys.executable, "-c", code],
        env={"ODDMC_BACKEND": backend, "PATH": "/usr/bin:/bin"},
        capture_output=True, text=True, check=True,
    )
    return float(out.stdout.strip())


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=12345)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    cases = kernel_cases(rng)

    print(f"{'kernel':<24}{'python':>12}{'cython':>12}{'speedup':>10}")
    for name, call in cases:
        t_py = bench(lambda: call(_kernels_py), args.repeat)
        if _kernels is None:
            print(f"{name:<24}{t_py * 1e3:>10.2f}ms{'n/a':>12}{'-':>10}")
            continue
        assert call(_kernels_py) == call(_kernels), f"backend mismatch in {name}"
        t_cy = bench(lambda: call(_kernels), args.repeat)
        print(f"{name:<24}{t_py * 1e3:>10.2f}ms{t_cy * 1e3:>10.2f}ms{t_py / t_cy:>9.2f}x")

    if _kernels is not None:
        t_py = bench_pipeline("python")
        t_cy = bench_pipeline("cython")
        print(f"{'pipeline hypercube-48':<24}{t_py * 1e3:>10.2f}ms{t_cy * 1e3:>10.2f}ms"
              f"{t_py / t_cy:>9.2f}x")
    else:
        print("compiled backend unavailable; install with Cython to compare")


if __name__ == "__main__":
    main()
