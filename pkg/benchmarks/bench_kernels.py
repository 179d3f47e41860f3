"""Time the compiled kernels against the pure-Python fallback.

Run with ``python benchmarks/bench_kernels.py [--repeat N]``.
"""
import argparse
import timeit

import numpy as np

from iestim import _kernels_py as py

try:
    from iestim import _kernels as cy
except ImportError:
    cy = None


def _cases(rng):
    levels = np.linspace(-1, 1, 11)
    M = rng.choice(levels, size=(40, 40))
    np.fill_diagonal(M, 1.0)
    D = rng.choice(np.linspace(0, 1, 9), size=(14, 10))
    H = rng.uniform(-1, 1, size=(400, 64))
    return {
        "seq_search ordered (40x40, d=6, none)": lambda mod: mod.seq_search(M, 0.15, 0.2, 6, True, 1e-12),
        "seq_search ordered (40x40, d=5, found)": lambda mod: mod.seq_search(M, 0.1, 0.0, 5, True, 1e-12),
        "eluder_longest (14 pairs x 10)": lambda mod: mod.eluder_longest(D, 0.25),
        "residual_sums (400x64)": lambda mod: mod.residual_sums(H, 3),
    }


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)
    if cy is None:
        print("compiled extension not built; only the Python timings are shown")
    print(f"{'kernel':<40}{'python (ms)':>14}{'cython (ms)':>14}{'speedup':>10}")
    for name, call in _cases(np.random.default_rng(args.seed)).items():
        t_py = min(timeit.repeat(lambda: call(py), number=1, repeat=args.repeat)) * 1e3
        if cy is None:
            print(f"{name:<40}{t_py:>14.3f}{'-':>14}{'-':>10}")
            continue
        assert np.array_equal(np.asarray(call(py), dtype=object), np.asarray(call(cy), dtype=object))
        t_cy = min(timeit.repeat(lambda: call(cy), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:<40}{t_py:>14.3f}{t_cy:>14.3f}{t_py / t_cy:>9.1f}x")


if __name__ == "__main__":
    main()
