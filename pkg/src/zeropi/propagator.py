"""Closed-form field propagation, intensity, coherence and dispersion scans.

The field at depth fraction zeta obeys the Volterra form

    phi(zeta, tau) = f(tau) - 2 c1 zeta om(tau) *
        int_{tau_min}^{tau} f(t') om(t') K1(psi) e^{-i (D(tau)-D(t'))} dt'

with om the control envelope relative to its cw level, K1(x) = J1(x)/x,
psi = 2 sqrt(c1 zeta (W(tau) - W(t'))) and D the accumulated two-photon
phase.  An optional damping factor e^{-gamma_pump_T (tau - t')} inserted in
the integrand regularizes the long-time pulse area (see ``observables``).

The coherence uses the same integral with the retrieval kernel
2 J1(x)/x - J2(x); the returned series is the dimensionless bracket integral
(the physical ground-state coherence is i times it, up to constant factors),
so it is real for a real input, real control and zero detuning.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import backend
from .config import InputPulse, MediumConfig, SimulationGrid, derive_couplings
from .control import ControlSchedule, CumulativeTables, build_tables, cw_schedule
from .special import integrate_samples, require_finite

__all__ = [
    "TimeSeries",
    "propagate_field",
    "intensity",
    "coherence",
    "dispersion_scan",
    "DispersionResult",
    "local_maxima",
    "centroid",
    "second_moment",
]


@dataclass(frozen=True)
class TimeSeries:
    """Complex samples at a fixed depth on a uniform time grid."""

    zeta: float
    tau: np.ndarray
    values: np.ndarray
    kind: str = "field"

    def __post_init__(self) -> None:
        if self.tau.shape != self.values.shape:
            raise ValueError("tau and values must have equal shapes")

    @property
    def dtau(self) -> float:
        return float(self.tau[1] - self.tau[0])


def _prepare(
    cfg: MediumConfig,
    schedule: ControlSchedule,
    pulse: InputPulse,
    grid: SimulationGrid,
    zeta: float,
    absorb_stark: bool,
    delta_total_T: float | None,
    tables: CumulativeTables | None,
    check_support: bool,
):
    if not 0.0 <= zeta <= 1.0:
        raise ValueError(f"zeta={zeta!r} outside [0, 1]")
    couplings = derive_couplings(cfg)
    if tables is None:
        tables = build_tables(schedule, grid, couplings,
                              raman_detuning_T=cfg.raman_detuning_T,
                              absorb_stark=absorb_stark,
                              delta_total_T=delta_total_T)
    if check_support:
        pulse.check_support(grid)
    f = pulse.sample(grid)
    return couplings, tables, f


def _volterra(tables: CumulativeTables, f: np.ndarray, c1zeta: float,
              gamma: float, kernel: int) -> np.ndarray:
    fw = f * tables.omega_rel
    dph = tables.d if np.any(tables.delta != 0.0) else None
    return backend.impl.volterra_prefix(tables.tau, tables.w, fw, dph,
                                        c1zeta, gamma, kernel)


def propagate_field(
    cfg: MediumConfig,
    schedule: ControlSchedule,
    pulse: InputPulse,
    grid: SimulationGrid,
    zeta: float,
    damped: bool = False,
    absorb_stark: bool = False,
    delta_total_T: float | None = None,
    tables: CumulativeTables | None = None,
    check_support: bool = True,
) -> TimeSeries:
    """Photon wave function phi(zeta, tau) on the grid.

    ``damped`` switches on the pump-rate damping factor in the kernel; it is
    only meaningful for pulse-area bookkeeping and is off for the physical
    (lossless) field.
    """
    couplings, tables, f = _prepare(cfg, schedule, pulse, grid, zeta,
                                    absorb_stark, delta_total_T, tables,
                                    check_support)
    gamma = couplings.gamma_pump_T if damped else 0.0
    integ = _volterra(tables, f, couplings.c1 * zeta, gamma,
                      backend.KERNEL_K1)
    phi = f - (2.0 * couplings.c1 * zeta) * tables.omega_rel * integ
    require_finite(phi, "propagate_field")
    return TimeSeries(zeta=zeta, tau=tables.tau, values=phi, kind="field")


def intensity(ts: TimeSeries) -> np.ndarray:
    """Pointwise |phi|^2."""
    return np.abs(ts.values) ** 2


def coherence(
    cfg: MediumConfig,
    schedule: ControlSchedule,
    pulse: InputPulse,
    grid: SimulationGrid,
    zeta: float,
    absorb_stark: bool = False,
    delta_total_T: float | None = None,
    tables: CumulativeTables | None = None,
    check_support: bool = True,
) -> TimeSeries:
    """Scaled ground-state coherence (the real bracket integral).

    At zeta -> 0 and late times this tends to the time integral of the input
    profile; its extrema line up with the zero crossings of the field.
    """
    couplings, tables, f = _prepare(cfg, schedule, pulse, grid, zeta,
                                    absorb_stark, delta_total_T, tables,
                                    check_support)
    bracket = _volterra(tables, f, couplings.c1 * zeta, 0.0,
                        backend.KERNEL_RETRIEVAL)
    require_finite(bracket, "coherence")
    return TimeSeries(zeta=zeta, tau=tables.tau, values=bracket,
                      kind="coherence")


@dataclass(frozen=True)
class DispersionResult:
    """One dispersion-scan output with shape diagnostics."""

    delta_total_T: float
    series: TimeSeries
    centroid_delay: float
    peak_count: int
    peak_positions: np.ndarray
    second_moment_ratio: float
    diagnostics: dict = field(default_factory=dict)


def dispersion_scan(
    cfg: MediumConfig,
    pulse: InputPulse,
    grid: SimulationGrid,
    delta_T_values,
    zeta: float = 1.0,
    peak_threshold: float = 0.05,
) -> list[DispersionResult]:
    """Propagate under a cw control for each constant two-photon detuning.

    Each result carries the centroid delay relative to the input pulse, the
    count of local intensity maxima above ``peak_threshold`` of the global
    maximum, and the ratio of output to input second central moments.
    """
    schedule = cw_schedule(cfg.omega0_over_delta)
    f = pulse.sample(grid)
    i_in = np.abs(f) ** 2
    tau = grid.tau
    c_in = centroid(tau, i_in, grid.dtau)
    m_in = second_moment(tau, i_in, grid.dtau)
    out = []
    for dv in delta_T_values:
        ts = propagate_field(cfg, schedule, pulse, grid, zeta,
                             delta_total_T=float(dv))
        ii = intensity(ts)
        peaks = local_maxima(ii, peak_threshold * ii.max())
        out.append(DispersionResult(
            delta_total_T=float(dv),
            series=ts,
            centroid_delay=centroid(tau, ii, grid.dtau) - c_in,
            peak_count=len(peaks),
            peak_positions=tau[peaks],
            second_moment_ratio=second_moment(tau, ii, grid.dtau) / m_in,
        ))
    return out


def local_maxima(y: np.ndarray, min_height: float | None = None) -> np.ndarray:
    """Indices of strict interior local maxima, optionally above a height."""
    y = np.asarray(y)
    idx = np.nonzero((y[1:-1] > y[:-2]) & (y[1:-1] > y[2:]))[0] + 1
    if min_height is not None:
        idx = idx[y[idx] > min_height]
    return idx


def centroid(tau: np.ndarray, weight: np.ndarray, dtau: float) -> float:
    norm = integrate_samples(weight, dtau)
    return float(integrate_samples(tau * weight, dtau) / norm)


def second_moment(tau: np.ndarray, weight: np.ndarray, dtau: float) -> float:
    c = centroid(tau, weight, dtau)
    norm = integrate_samples(weight, dtau)
    return float(integrate_samples((tau - c) ** 2 * weight, dtau) / norm)


def scale_pair_check(cfg: MediumConfig, pulse: InputPulse,
                     grid: SimulationGrid, a: float = 4.0,
                     zeta: float = 1.0) -> float:
    """Max pointwise intensity difference between (zeta/a, Omega0) and
    (zeta, Omega0/sqrt(a)); the propagation law depends on zeta*Omega0^2
    only, so the result is at rounding level."""
    ts1 = propagate_field(cfg, cw_schedule(cfg.omega0_over_delta), pulse,
                          grid, zeta / a, absorb_stark=True)
    cfg2 = MediumConfig(
        gamma_T=cfg.gamma_T,
        delta_over_gamma=cfg.delta_over_gamma,
        omega0_over_delta=cfg.omega0_over_delta / math.sqrt(a),
        alpha_L=cfg.alpha_L,
        raman_detuning_T=cfg.raman_detuning_T,
        ct_over_L=cfg.ct_over_L,
        k_L=cfg.k_L,
        gamma0_T=cfg.gamma0_T,
    )
    ts2 = propagate_field(cfg2, cw_schedule(cfg2.omega0_over_delta), pulse,
                          grid, zeta, absorb_stark=True)
    return float(np.max(np.abs(intensity(ts1) - intensity(ts2))))
