"""Compare the compiled and pure-Python segment-variance kernels.

The segment sweep inside the fluctuation function is the hot loop of the
whole pipeline, so both backends are timed on the default scale grid of a
2^16-sample signal and checked for exact agreement.

Run:  python3 benchmarks/bench_backends.py
"""
import time

import numpy as np

from fractalsig import _kernels_py, build_profile, default_s_grid, gen_fgn
from fractalsig.mfdfa import _detrend_basis

try:
    from fractalsig import _kernels
except ImportError:
    _kernels = None


def sweep(kernel, profile, scales, m):
    out = []
    for s in scales:
        basis = _detrend_basis(int(s), m)
        out.append(kernel.segment_variances(profile, int(s), basis))
    return out


def time_sweep(kernel, profile, scales, m, repeats=5):
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        sweep(kernel, profile, scales, m)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    n = 2 ** 16
    signal = gen_fgn(0.7, 16, seed=7)
    profile = build_profile(signal).values
    scales = default_s_grid(n)
    m = 1

    backends = [("python", _kernels_py)]
    if _kernels is not None:
        backends.append(("cython", _kernels))

    print(f"signal N = {n}, scales = {len(scales)} "
          f"({scales[0]}..{scales[-1]}), detrend order {m}")
    results = {}
    for name, kernel in backends:
        sweep(kernel, profile, scales, m)  # warm up caches
        elapsed = time_sweep(kernel, profile, scales, m)
        results[name] = (elapsed, sweep(kernel, profile, scales, m))
        print(f"  {name:<7} {elapsed * 1e3:8.2f} ms per full sweep")

    if len(results) == 2:
        py_time, py_out = results["python"]
        cy_time, cy_out = results["cython"]
        worst = 0.0
        for (pv, ps), (cv, cs) in zip(py_out, cy_out):
            worst = max(worst,
                        np.max(np.abs(pv - cv) / np.maximum(np.abs(pv), 1e-300)),
                        np.max(np.abs(ps - cs) / np.maximum(np.abs(ps), 1e-300)))
        print(f"  speedup: {py_time / cy_time:.2f}x, "
              f"max relative disagreement: {worst:.3e} "
              "(summation-order rounding only)")
    else:
        print("  compiled backend unavailable; timed pure Python only")


if __name__ == "__main__":
    main()
