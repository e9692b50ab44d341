"""Time the numba and numpy kernels side by side.

    python benchmarks/bench_kernels.py [--repeat 5]

The first numba call compiles; it is run once before timing.
"""

import argparse
import timeit

import numpy as np

from gbessel import _kernels


def cases():
    th = np.linspace(0, 2 * np.pi, 720)
    rng = np.random.default_rng(0)
    c = rng.standard_normal(21) + 1j * rng.standard_normal(21)
    z = rng.standard_normal(10_000) + 1j * rng.standard_normal(10_000)
    w = 3 * (rng.standard_normal(2000) + 1j * rng.standard_normal(2000))
    n = 200
    diag = np.array([-0.25 / 2 if k == 0 else 0.0 for k in range(n)], dtype=np.complex128)
    off = 1j * 0.125 * np.ones(n - 1)
    gl = (_kernels.GL_NODES, _kernels.GL_WEIGHTS)
    return {
        "horner (deg 20, 1e4 points)": ("horner", (c, z)),
        "weight_series (720 points)": ("weight_series", (2.0, 0.3, th, 40)),
        "weight_integral (720 points)": ("weight_integral", (1.1, 0.53, th, 1e-13, *gl)),
        "hyp1f1_one (2000 points)": ("hyp1f1_one", (1.7, w, 1e-17)),
        "power_iteration (N=200)": ("power_iteration", (diag, off, 1e-12, 10 ** 4)),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    backends = {"numpy": _kernels.numpy_impl}
    if _kernels.numba_impl:
        backends["numba"] = _kernels.numba_impl
    print(f"{'kernel':32s}" + "".join(f"{name:>14s}" for name in backends) + "   (best of %d, ms)" % args.repeat)
    for label, (key, fargs) in cases().items():
        row = []
        for impl in backends.values():
            impl[key](*fargs)  # warm up / compile
            t = min(timeit.repeat(lambda: impl[key](*fargs), number=1, repeat=args.repeat))
            row.append(t * 1e3)
        print(f"{label:32s}" + "".join(f"{t:14.3f}" for t in row))


if __name__ == "__main__":
    main()
