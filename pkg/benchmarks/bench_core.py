"""Timing comparison of the compiled pairwise kernels vs the numpy fallback.

Run from the repository root:

    python3 benchmarks/bench_core.py [--sizes 100,200,400,800]

Both backends are imported in the same process; agreement is checked
before timing so the numbers always refer to identical computations.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

import swarmhydro._core as core
from swarmhydro._core import _fallback


def _time(fn, *args, repeat: int = 5) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def bench_hydro(n: int, rng) -> tuple[float, float]:
    eta = np.sort(rng.uniform(-1.0, 1.0, n))
    v = rng.normal(size=n)
    w = rng.uniform(1e-3, 2e-2, n)
    out = np.empty(n)
    args = (eta, v, w, 0.5, True, False, False,
            core.POT_CODES["newtonian"], -0.5, 1.0, 0.0, 0.0, 0.0, out)
    ref = np.empty(n)
    _fallback.hydro_accel(*args[:-1], ref)
    core.hydro_accel(*args)
    assert np.allclose(out, ref, rtol=1e-12, atol=1e-14)
    return (_time(core.hydro_accel, *args),
            _time(_fallback.hydro_accel, *args[:-1], ref))


def bench_particle(n: int, rng) -> tuple[float, float]:
    x = rng.uniform(-10.0, 10.0, (n, 2))
    v = rng.normal(size=(n, 2))
    out = np.empty_like(x)
    args = (x, v, 0.8, True, True, core.POT_CODES[None],
            0.0, 0.0, 0.0, 0.0, 0.0, False, out)
    ref = np.empty_like(x)
    _fallback.particle_accel(*args[:-1], ref)
    core.particle_accel(*args)
    assert np.allclose(out, ref, rtol=1e-12, atol=1e-14)
    return (_time(core.particle_accel, *args),
            _time(_fallback.particle_accel, *args[:-1], ref))


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", default="100,200,400,800")
    sizes = [int(s) for s in ap.parse_args().sizes.split(",")]

    if core.BACKEND != "compiled":
        print("note: compiled backend unavailable, timing fallback against itself")

    rng = np.random.default_rng(42)
    print(f"{'kernel':<10} {'n':>5} {'compiled':>12} {'numpy':>12} {'speedup':>8}")
    for n in sizes:
        tc, tf = bench_hydro(n, rng)
        print(f"{'hydro':<10} {n:>5} {tc * 1e6:>10.1f}us {tf * 1e6:>10.1f}us "
              f"{tf / tc:>7.2f}x")
    for n in sizes:
        tc, tf = bench_particle(n, rng)
        print(f"{'particle':<10} {n:>5} {tc * 1e6:>10.1f}us {tf * 1e6:>10.1f}us "
              f"{tf / tc:>7.2f}x")


if __name__ == "__main__":
    main()
