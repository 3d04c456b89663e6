"""Compiled kernel core vs the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat N]

Prints one line per kernel: best-of-N time for each backend, the speed-up,
and the largest relative difference between the two results.
"""

import argparse
import timeit

import numpy as np

from huygens import _pykernels

try:
    from huygens import _kernels
except ImportError:
    _kernels = None


def cases(rng):
    x = rng.uniform(-50.0, 1.0, 20000)
    a1 = rng.uniform(0.1, 5.0, 20000)
    a2 = a1 + rng.uniform(0.01, 5.0, 20000)
    b1 = rng.uniform(0.1, 20.0, 20000)
    b2 = b1 + rng.uniform(0.01, 5.0, 20000)
    R = rng.uniform(0.01, 10.0, 20000)
    ks = np.linspace(0.5, 40.0, 64)
    return {
        "dilog_array (20k points)": lambda k: k.dilog_array(x),
        "signal_terms (20k geometries)": lambda k: k.signal_terms(a1, a2, b1, b2, R)[1:],
        "window_remainder (alpha=5/2, 64 k)": lambda k: k.window_remainder(2.5, ks, 1.0, 2.0, 3.0, 7.0),
        "window_remainder (alpha=4.2, 64 k)": lambda k: k.window_remainder(4.2, ks, 0.5, 3.0, 2.0, 9.0),
    }


def _maxrel(u, v):
    u, v = np.atleast_1d(np.asarray(u, float)), np.atleast_1d(np.asarray(v, float))
    scale = np.maximum(np.abs(u).max(), 1e-300)
    return float(np.abs(u - v).max() / scale)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if _kernels is None:
        print("compiled core not built; only the python backend is available")
    rng = np.random.default_rng(0)
    print(f"{'kernel':38s} {'python':>10s} {'cython':>10s} {'speed-up':>9s} {'max rel diff':>13s}")
    for name, fn in cases(rng).items():
        t_py = min(timeit.repeat(lambda: fn(_pykernels), number=1, repeat=args.repeat))
        if _kernels is None:
            print(f"{name:38s} {t_py:10.4f} {'-':>10s}")
            continue
        t_cy = min(timeit.repeat(lambda: fn(_kernels), number=1, repeat=args.repeat))
        py, cy = fn(_pykernels), fn(_kernels)
        if isinstance(py, tuple):
            diff = max(_maxrel(p, c) for p, c in zip(py, cy))
        else:
            diff = _maxrel(py, cy)
        print(f"{name:38s} {t_py:10.4f} {t_cy:10.4f} {t_py / t_cy:8.1f}x {diff:13.2e}")


if __name__ == "__main__":
    main()
