"""Brute-force integrator of the linearized propagation equations.

In wave variables the dimensionless system closes on the single coupling
sqrt(c1):

    d phi / d zeta = i sqrt(c1) om(tau) s          [- k_L phi]
    d s   / d tau  = -i delta(tau) s + i sqrt(c1) om(tau) phi
                                                   [- (pump + gamma0_T) s]

where s is the ground-state coherence scaled by sqrt(N L / (c T)), om the
control envelope relative to its cw level, and the bracketed loss terms are
enabled by ``with_losses``.  The march is deliberately independent of the
closed-form kernel route: classical RK4 along tau per depth slice, explicit
midpoint coupling in depth.  It exists to validate the closed forms, so
transparency beats speed; the compiled backend keeps it fast anyway.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import backend
from .config import InputPulse, MediumConfig, SimulationGrid, derive_couplings
from .control import ControlSchedule
from .errors import GridResolutionError, NumericalError

__all__ = ["OracleField", "integrate", "convergence_study",
           "ConvergenceResult"]


@dataclass(frozen=True)
class OracleField:
    """Marched solution: stored depth slices plus per-slice end coherence."""

    zetas: np.ndarray
    tau: np.ndarray
    phi: np.ndarray
    s: np.ndarray
    s_end: np.ndarray
    n_zeta: int

    def field_at(self, zeta: float) -> np.ndarray:
        """phi at a stored depth fraction (exact match required)."""
        idx = np.nonzero(np.abs(self.zetas - zeta) < 1e-12)[0]
        if idx.size == 0:
            raise ValueError(f"zeta={zeta!r} was not stored "
                             f"(have {self.zetas})")
        return self.phi[idx[0]]

    def coherence_at(self, zeta: float) -> np.ndarray:
        idx = np.nonzero(np.abs(self.zetas - zeta) < 1e-12)[0]
        if idx.size == 0:
            raise ValueError(f"zeta={zeta!r} was not stored")
        return self.s[idx[0]]


def _delta_profile(cfg, couplings, schedule, tau, absorb_stark,
                   delta_total_T):
    om = np.asarray(schedule.relative_envelope(tau), dtype=float)
    if delta_total_T is not None:
        return om, np.full_like(tau, float(delta_total_T))
    delta = np.full_like(tau, cfg.raman_detuning_T)
    if not absorb_stark:
        delta = delta + couplings.stark_T * om * om
    return om, delta


def integrate(
    cfg: MediumConfig,
    schedule: ControlSchedule,
    pulse: InputPulse,
    grid: SimulationGrid,
    n_zeta: int = 100,
    with_losses: bool = False,
    absorb_stark: bool = False,
    delta_total_T: float | None = None,
    store_every: int | None = None,
    enforce_resolution: bool = True,
    check_support: bool = True,
) -> OracleField:
    """March the system from zeta = 0 to 1 on a (zeta x tau) grid.

    Resolution preconditions (unless ``enforce_resolution`` is off, which
    the convergence study uses deliberately): dtau <= 0.01 and small enough
    to resolve the fastest detuning phase, dzeta <= 0.01.
    """
    couplings = derive_couplings(cfg)
    tau = grid.tau
    dt = grid.dtau
    om_n, dl_n = _delta_profile(cfg, couplings, schedule, tau, absorb_stark,
                                delta_total_T)
    if enforce_resolution:
        dmax = float(np.abs(dl_n).max())
        limit = min(0.01, 1.0 / (10.0 * dmax)) if dmax > 0 else 0.01
        if dt > limit * (1 + 1e-9):
            raise GridResolutionError(
                f"dtau={dt:.4g} exceeds the resolution limit {limit:.4g}")
        if 1.0 / n_zeta > 0.01 * (1 + 1e-9):
            raise GridResolutionError(
                f"dzeta={1.0 / n_zeta:.4g} exceeds 0.01")
    if check_support:
        pulse.check_support(grid)

    mids = tau[:-1] + 0.5 * dt
    om_m, dl_m = _delta_profile(cfg, couplings, schedule, mids, absorb_stark,
                                delta_total_T)
    if with_losses:
        gam_n = couplings.gamma_pump_T * om_n * om_n + cfg.gamma0_T
        gam_m = couplings.gamma_pump_T * om_m * om_m + cfg.gamma0_T
        k_l = cfg.k_L
    else:
        gam_n = np.zeros_like(om_n)
        gam_m = np.zeros_like(om_m)
        k_l = 0.0

    f = pulse.sample(grid)
    if store_every is None:
        store_every = max(1, n_zeta // 100)
    idx, phi, s, s_end = backend.impl.oracle_march(
        f, om_n, om_m, dl_n, dl_m, gam_n, gam_m,
        math.sqrt(couplings.c1), k_l, dt, n_zeta, store_every)

    for name, arr in (("phi", phi), ("s", s)):
        bad = ~np.isfinite(arr)
        if bad.any():
            i, j = np.argwhere(bad)[0]
            raise NumericalError(
                f"oracle {name} non-finite at zeta={idx[i] / n_zeta:.4g}, "
                f"tau={tau[j]:.4g}")
    return OracleField(zetas=idx.astype(float) / n_zeta, tau=tau, phi=phi,
                       s=s, s_end=s_end, n_zeta=n_zeta)


@dataclass(frozen=True)
class ConvergenceResult:
    """Self-convergence table for the depth march."""

    dtaus: tuple[float, ...]
    dzetas: tuple[float, ...]
    diffs: tuple[float, ...]
    orders: tuple[float, ...]
    monotone: bool

    @property
    def observed_order(self) -> float:
        return min(self.orders) if self.orders else math.nan


def convergence_study(
    cfg: MediumConfig,
    schedule: ControlSchedule,
    pulse: InputPulse,
    grid: SimulationGrid,
    n_zeta: int = 25,
    levels: int = 3,
    absorb_stark: bool = False,
    delta_total_T: float | None = None,
) -> ConvergenceResult:
    """Richardson-style self-convergence of the final slice.

    Both steps are halved together per level; differences between successive
    levels are taken in the max norm on the coarsest time nodes and the
    observed order is log2 of their ratio.  Needs ``levels >= 3``.
    """
    if levels < 3:
        raise ValueError("need at least 3 refinement levels")
    fields = []
    dtaus, dzetas = [], []
    for lvl in range(levels):
        factor = 2 ** lvl
        g = SimulationGrid(grid.tau_min, grid.tau_max,
                           (grid.n_tau - 1) * factor + 1, grid.z_fractions)
        fields.append(integrate(cfg, schedule, pulse, g,
                                n_zeta=n_zeta * factor,
                                absorb_stark=absorb_stark,
                                delta_total_T=delta_total_T,
                                store_every=n_zeta * factor,
                                enforce_resolution=False))
        dtaus.append(g.dtau)
        dzetas.append(1.0 / (n_zeta * factor))
    diffs = []
    for lvl in range(levels - 1):
        coarse = fields[lvl].phi[-1]
        fine = fields[lvl + 1].phi[-1][::2]
        diffs.append(float(np.abs(coarse - fine).max()))
    orders = [math.log2(diffs[i] / diffs[i + 1]) if diffs[i + 1] > 0
              else math.inf for i in range(len(diffs) - 1)]
    monotone = all(d1 > d2 for d1, d2 in zip(diffs, diffs[1:]))
    return ConvergenceResult(dtaus=tuple(dtaus), dzetas=tuple(dzetas),
                             diffs=tuple(diffs), orders=tuple(orders),
                             monotone=monotone)
