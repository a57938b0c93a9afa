"""Timing comparison: compiled kernels vs the pure-python fallback.

Run as a script:

    python benchmarks/bench_kernels.py

Reports per-call times for the hot kernels under both backends and the
end-to-end effect on one adaptive oval integral.
"""

import timeit

import numpy as np

from eightloop import _kernels_py
from eightloop import kernels

try:
    from eightloop import _kernels
    HAVE_COMPILED = True
except ImportError:
    _kernels = None
    HAVE_COMPILED = False


def _time(fn, number):
    return min(timeit.repeat(fn, number=number, repeat=5)) / number


def bench_pointwise(impl):
    a = np.linspace(-1.0, 1.0, 10)
    b = np.linspace(1.0, -1.0, 10)
    return {
        "ham": _time(lambda: impl.ham(0.7, -0.3), 20000),
        "cubic_eval": _time(lambda: impl.cubic_eval(a, 0.7, -0.3), 20000),
        "vf_rhs": _time(lambda: impl.vf_rhs(0.7, -0.3, a, b, 1e-3), 20000),
    }


def bench_batch(impl):
    a = np.linspace(-1.0, 1.0, 10)
    b = np.linspace(1.0, -1.0, 10)
    xs = np.linspace(0.3, 1.3, 512)
    ys = np.linspace(-0.5, 0.5, 512)
    th = np.linspace(1e-3, np.pi / 2 - 1e-3, 512)
    return {
        "vf_rhs_many[512]": _time(
            lambda: impl.vf_rhs_many(xs, ys, a, b, 1e-3), 2000),
        "moment_integrand[512]": _time(
            lambda: impl.moment_integrand(th, 0.3, 1.3, -0.3, -1.3, 2), 2000),
    }


def bench_integral():
    """One basic integral through whichever backend kernels.py selected."""
    from eightloop.hamiltonian import OvalSpec
    from eightloop.quadrature import basic_integral

    return _time(lambda: basic_integral(2, OvalSpec(-0.1)), 20)


def main():
    impls = [("python", _kernels_py)]
    if HAVE_COMPILED:
        impls.append(("cython", _kernels))
    results = {}
    for name, impl in impls:
        results[name] = {**bench_pointwise(impl), **bench_batch(impl)}
    keys = list(results[impls[0][0]])
    header = ["kernel"] + [name for name, _ in impls]
    if HAVE_COMPILED:
        header.append("speedup")
    print("  ".join(h.ljust(22) for h in header))
    for key in keys:
        row = [key] + [f"{results[name][key] * 1e6:.3f} us"
                       for name, _ in impls]
        if HAVE_COMPILED:
            row.append(f"{results['python'][key] / results['cython'][key]:.2f}x")
        print("  ".join(str(c).ljust(22) for c in row))
    print()
    print(f"active backend: {kernels.BACKEND}")
    print(f"basic_integral(2, h=-0.1): {bench_integral() * 1e3:.3f} ms")


if __name__ == "__main__":
    main()
