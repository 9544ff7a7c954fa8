"""Time the numba kernels against their pure-numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat N]

The end-to-end row runs a one_vs_rest_1_23 discord evaluation in a fresh
interpreter per path, selected through TQDCHAIN_DISABLE_NUMBA.
"""

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from tqdchain import kernels
from tqdchain._accel import HAVE_NUMBA
from tqdchain.discord import measurement_grid
from tqdchain.spinmodel import SpinImpurityParams, thermal_state

END_TO_END = """
import time
from tqdchain import discord, thermal_state, SpinImpurityParams
rho = thermal_state(SpinImpurityParams(0.7, 1.0), 0.8)
discord(rho, "one_vs_rest_1_23")
t = time.perf_counter()
for _ in range({n}):
    discord(rho, "one_vs_rest_1_23")
print((time.perf_counter() - t) / {n})
"""


def best_of(fn, repeat, number):
    return min(timeit.repeat(fn, repeat=repeat, number=number)) / number


def end_to_end(disable, n):
    env = dict(os.environ, TQDCHAIN_DISABLE_NUMBA="1" if disable else "0")
    out = subprocess.run(
        [sys.executable, "-c", END_TO_END.format(n=n)],
        env=env, capture_output=True, text=True, check=True,
    )
    return float(out.stdout.strip())


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not HAVE_NUMBA:
        sys.exit("numba is not installed; install the 'fast' extra to compare paths")

    rng = np.random.default_rng(0)
    m = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
    h = np.ascontiguousarray((m + m.conj().T) / 2)
    rho = np.ascontiguousarray(thermal_state(SpinImpurityParams(0.7, 1.0), 0.8).matrix)
    rho2 = np.ascontiguousarray(np.eye(4, dtype=complex) / 4 + 0.05 * np.diag([1, -1, -1, 1]))
    thetas, phis = measurement_grid()

    cases = [
        ("jacobi 8x8", lambda: kernels._jacobi_nb(h, True), lambda: kernels._jacobi_np(h, True), 200),
        ("grid 64x64, d_B=2",
         lambda: kernels._cond_entropy_grid_nb(rho2, 2, thetas, phis),
         lambda: kernels._cond_entropy_grid_np(rho2, 2, thetas, phis), 5),
        ("grid 64x64, d_B=4",
         lambda: kernels._cond_entropy_grid_nb(rho, 4, thetas, phis),
         lambda: kernels._cond_entropy_grid_np(rho, 4, thetas, phis), 3),
        ("point, d_B=4",
         lambda: kernels._cond_entropy_point_nb(rho, 4, 0.3, 1.1),
         lambda: kernels._cond_entropy_point_np(rho, 4, 0.3, 1.1), 500),
    ]
    print(f"{'kernel':<22}{'numba':>12}{'numpy':>12}{'speedup':>10}")
    for name, fast, slow, number in cases:
        fast()  # compile
        a = best_of(fast, args.repeat, number)
        b = best_of(slow, args.repeat, number)
        print(f"{name:<22}{a * 1e3:>10.3f}ms{b * 1e3:>10.3f}ms{b / a:>9.1f}x")
    a = end_to_end(False, 20)
    b = end_to_end(True, 20)
    print(f"{'discord 1|23':<22}{a * 1e3:>10.3f}ms{b * 1e3:>10.3f}ms{b / a:>9.1f}x")


if __name__ == "__main__":
    main()
