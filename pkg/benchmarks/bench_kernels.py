"""Compare the compiled coefficient kernels against the pure-Python fallback.

Two measurements:
  * raw kernel passes (multiply / exact-divide a dense coefficient list by
    1 - q^t), timed in-process for both implementations;
  * an end-to-end family expansion, run in subprocesses so each one binds
    its backend at import (DIVCERT_FORCE_PURE=1 selects the fallback).

Run as: python benchmarks/bench_kernels.py
"""

import os
import subprocess
import sys
import time

from divcert import _kernels as pure

try:
    from divcert import _ckernels as compiled
except ImportError:
    compiled = None


def time_kernel_passes(mod, size=200_000, t=137, rounds=30):
    coeffs = [(i * 2654435761) % 1000 - 500 for i in range(size)]
    start = time.perf_counter()
    c = list(coeffs)
    for _ in range(rounds):
        c = mod.mul_one_minus_qt(c, t)
    for _ in range(rounds):
        c = mod.div_one_minus_qt(c, t)
    elapsed = time.perf_counter() - start
    assert c == coeffs, "mul/div round trip must be exact"
    return elapsed


END_TO_END = (
    "import time; from divcert import qpoly, KERNEL_BACKEND; "
    "t = time.perf_counter(); "
    "p = qpoly.expand(qpoly.qbinom_factorization(700, 350)); "
    "print(KERNEL_BACKEND, time.perf_counter() - t, p.degree)"
)


def time_end_to_end(force_pure):
    env = dict(os.environ)
    env["DIVCERT_BUDGET_DEGREE"] = "200000"
    if force_pure:
        env["DIVCERT_FORCE_PURE"] = "1"
    else:
        env.pop("DIVCERT_FORCE_PURE", None)
    out = subprocess.check_output(
        [sys.executable, "-c", END_TO_END], env=env, text=True).split()
    return out[0], float(out[1])


def main():
    print(f"{'kernel passes (60 x 200k coeffs)':<40}")
    pure_t = time_kernel_passes(pure)
    print(f"  python: {pure_t:8.3f}s")
    if compiled is not None:
        comp_t = time_kernel_passes(compiled)
        print(f"  c:      {comp_t:8.3f}s   speedup {pure_t / comp_t:.2f}x")
    else:
        print("  c:      unavailable (extension not built)")

    print(f"{'expand [700, 350]_q (subprocess)':<40}")
    backend, base = time_end_to_end(force_pure=False)
    print(f"  {backend}: {base:8.3f}s")
    if backend == "c":
        backend2, fallback = time_end_to_end(force_pure=True)
        assert backend2 == "python"
        print(f"  python: {fallback:8.3f}s   speedup {fallback / base:.2f}x")


if __name__ == "__main__":
    main()
