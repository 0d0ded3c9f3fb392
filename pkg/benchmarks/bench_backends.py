"""Compare the pure-numpy and compiled kernel backends.

Times the full continuation loop of the first built-in example (a
closed loop through four trivial solutions) plus the raw corrector
kernel, under each backend.

Run:  python3 benchmarks/bench_backends.py
"""

import time

import numpy as np

from specdeg import _kernels, examples, perturbed as pt


def time_trace(repeats=5):
    prob, _ = examples.example(1)
    best = float("inf")
    npts = 0
    for _ in range(repeats):
        t0 = time.perf_counter()
        (branch,) = pt.trace_component(prob, 1.0, np.array([1.0, 0.0]))
        best = min(best, time.perf_counter() - t0)
        npts = len(branch.points)
    return best, npts


def time_corrector(repeats=2000):
    prob, (curve,) = examples.example(1)
    N = prob.N
    x_exact = curve.eval(1.0)
    x0 = x_exact + np.array([1e-3, -2e-3, 1e-3, 2e-3])
    cnormal = curve.eval(1.0001) - curve.eval(0.9999)
    cnormal /= np.linalg.norm(cnormal)
    cvalue = float(cnormal @ x0)
    t0 = time.perf_counter()
    for _ in range(repeats):
        _kernels.newton_correct(prob.L, N._coefs, N._exps, N._offsets,
                                x0.copy(), cnormal, cvalue, 1e-12, 50)
    return (time.perf_counter() - t0) / repeats


def main():
    results = {}
    initial = _kernels.current()
    for name in _kernels.available():
        _kernels.select(name)
        trace_s, npts = time_trace()
        corr_s = time_corrector()
        results[name] = (trace_s, npts, corr_s)
        print(f"{name:>9}: loop trace {trace_s * 1e3:8.2f} ms "
              f"({npts} points), corrector {corr_s * 1e6:7.2f} us/call")
    _kernels.select(initial)
    if len(results) == 2:
        speedup = results["pure"][0] / results["compiled"][0]
        print(f"compiled backend speedup on the loop trace: {speedup:.1f}x")


if __name__ == "__main__":
    main()
