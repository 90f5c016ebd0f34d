"""Benchmark: compiled kernels vs the numpy fallback.

Times the two hot paths on representative workloads - the O(n^2) Volterra
prefix evaluation (plain, phase-rotated and damped variants) and the
depth-marching reference integrator - and reports the speedup plus the
worst cross-backend deviation.

Run:  python benchmarks/compare_backends.py [--n 4001] [--repeats 3]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from zeropi import backend
from zeropi.config import InputPulse, MediumConfig, SimulationGrid, derive_couplings
from zeropi.control import build_tables, cw_schedule


def _best_of(fn, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=4001, help="time nodes")
    ap.add_argument("--n-zeta", type=int, default=200, help="depth steps")
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()

    names = backend.available_backends()
    if "cython" not in names:
        print("compiled backend not available; build with "
              "'python setup.py build_ext --inplace' first")
        return 1
    impls = {name: backend.get_backend(name) for name in names}

    cfg = MediumConfig(gamma_T=7.2, delta_over_gamma=20.0,
                       omega0_over_delta=0.1, alpha_L=3.5)
    grid = SimulationGrid(-6.0, 34.0, args.n)
    tables = build_tables(cw_schedule(0.1), grid, derive_couplings(cfg),
                          absorb_stark=True)
    fw = InputPulse().sample(grid) * tables.omega_rel
    dph = np.linspace(0.0, 5.0 * (grid.tau_max - grid.tau_min), args.n)

    volterra_cases = {
        f"volterra plain (n={args.n})": (tables.tau, tables.w, fw, None,
                                         0.126, 0.0, 1),
        f"volterra phase (n={args.n})": (tables.tau, tables.w, fw, dph,
                                         5.0, 0.0, 1),
        f"volterra damped (n={args.n})": (tables.tau, tables.w, fw, None,
                                          0.126, 0.036, 1),
    }

    ogrid = SimulationGrid(-6.0, 14.0, 2001)
    f = InputPulse().sample(ogrid)
    tau = ogrid.tau
    mids = tau[:-1] + 0.5 * ogrid.dtau
    ones_n, ones_m = np.ones_like(tau), np.ones(tau.size - 1)
    zeros_n, zeros_m = np.zeros_like(tau), np.zeros(tau.size - 1)
    oracle_args = (f, ones_n, ones_m, zeros_n, zeros_m, zeros_n, zeros_m,
                   np.sqrt(0.126), 0.0, ogrid.dtau, args.n_zeta, args.n_zeta)

    header = f"{'case':36s} {'python':>10s} {'cython':>10s} " \
             f"{'speedup':>8s} {'max dev':>10s}"
    print(header)
    print("-" * len(header))
    for label, call in volterra_cases.items():
        res = {}
        t = {}
        for name, impl in impls.items():
            t[name] = _best_of(lambda i=impl: i.volterra_prefix(*call),
                               args.repeats)
            res[name] = impl.volterra_prefix(*call)
        dev = float(np.abs(res["python"] - res["cython"]).max())
        print(f"{label:36s} {t['python']:9.3f}s {t['cython']:9.3f}s "
              f"{t['python'] / t['cython']:7.1f}x {dev:10.2e}")

    res, t = {}, {}
    label = f"depth march ({ogrid.n_tau}x{args.n_zeta})"
    for name, impl in impls.items():
        t[name] = _best_of(lambda i=impl: i.oracle_march(*oracle_args),
                           args.repeats)
        res[name] = impl.oracle_march(*oracle_args)[1][-1]
    dev = float(np.abs(res["python"] - res["cython"]).max())
    print(f"{label:36s} {t['python']:9.3f}s {t['cython']:9.3f}s "
          f"{t['python'] / t['cython']:7.1f}x {dev:10.2e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
