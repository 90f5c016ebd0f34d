"""Storage and multi-pulse readout: temporal-mode profiles, occupations,
orthogonality checks and amplitude equalization.

After a switch-off at tau0, a train of well-separated readout pulses recalls
the stored excitation into disjoint time bins.  Every mode profile is the
readout envelope times one shared storage integral

    S(zeta, tau) = int f(t') f0(t' - tau0) K1(psi(tau, t')) dt'

so mode i carries the sign of its readout amplitude, and the transmitted
part (mode 0) additionally contains the input profile itself.  Occupations
are profile norms; for a lossless run with a window containing all bins they
sum to one up to the excitation still stored at the window end.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from . import backend
from .config import InputPulse, MediumConfig, SimulationGrid, derive_couplings
from .control import ControlSchedule, ReadoutPulse
from .errors import ConfigError, ModeOverlapError
from .propagator import TimeSeries
from .special import integrate_samples, require_finite

__all__ = [
    "TemporalMode",
    "OutputState",
    "storage_integral",
    "mode_profiles",
    "mode_amplitudes",
    "check_orthogonality",
    "decomposition_residual",
    "equalize_readout_pair",
]


@dataclass(frozen=True)
class TemporalMode:
    """One time bin of the output photon."""

    index: int
    profile: np.ndarray
    window: tuple[float, float]
    sign: int
    r: float = 0.0
    n: float = 0.0
    leakage: float = 0.0


@dataclass(frozen=True)
class OutputState:
    """Decomposed output state: modes, occupations and overlap matrix."""

    tau: np.ndarray
    modes: tuple[TemporalMode, ...]
    overlaps: np.ndarray
    total: float = 0.0
    diagnostics: dict = field(default_factory=dict)
    warnings: tuple[str, ...] = ()

    @property
    def dtau(self) -> float:
        return float(self.tau[1] - self.tau[0])

    def summed_profile(self) -> np.ndarray:
        out = np.zeros_like(self.modes[0].profile)
        for m in self.modes:
            out = out + m.profile
        return out


def _validate_schedule(cfg: MediumConfig, schedule: ControlSchedule,
                       require_cw: bool = True) -> None:
    if schedule.switch_off is None:
        raise ConfigError("time-bin retrieval requires a switch-off")
    if cfg.raman_detuning_T != 0.0:
        raise ConfigError("time-bin profiles assume zero two-photon "
                          "detuning; set raman_detuning_T = 0")
    if schedule.cw_level <= 0.0 and (require_cw or schedule.readout):
        raise ConfigError("time-bin retrieval requires a nonzero cw level")


def _decomposition_energy(schedule: ControlSchedule,
                          grid: SimulationGrid) -> np.ndarray:
    """Cumulative control energy with envelope cross terms dropped.

    The bin decomposition assumes well-separated pulses, under which the
    energy of the total envelope is the sum of the individual energies.
    Dropping the (tiny) cross terms makes every mode profile exactly linear
    in its own readout amplitude - sign flips negate the profile bitwise -
    at the price of a residual against the direct propagation that the
    decomposition check measures.
    """
    tau = grid.tau
    e = np.asarray(schedule.switch_envelope(tau), dtype=float) ** 2
    for p in schedule.readout:
        rel = p.amp / schedule.cw_level
        e = e + (rel * rel) * p.envelope(tau) ** 2
    out = np.zeros_like(e)
    np.cumsum(0.5 * grid.dtau * (e[1:] + e[:-1]), out=out[1:])
    return out


def storage_integral(
    cfg: MediumConfig,
    pulse: InputPulse,
    schedule: ControlSchedule,
    grid: SimulationGrid,
    zeta: float = 1.0,
) -> np.ndarray:
    """Shared storage integral S(zeta, tau) on the grid.

    The kernel argument uses the accumulated schedule energy (so S steps
    down across each readout pulse) while the source is the input profile
    times the switch-off envelope only.  With the control off entirely the
    kernel pins to its zero-argument value 1/2, so S is half the running
    integral of f*f0 (and every mode profile carries a zero prefactor).
    """
    _validate_schedule(cfg, schedule, require_cw=False)
    if not 0.0 <= zeta <= 1.0:
        raise ValueError(f"zeta={zeta!r} outside [0, 1]")
    d = derive_couplings(cfg)
    w = _decomposition_energy(schedule, grid)
    f = pulse.sample(grid)
    fw = f * schedule.switch_envelope(grid.tau)
    out = backend.impl.volterra_prefix(grid.tau, w, fw, None,
                                       d.c1 * zeta, 0.0, backend.KERNEL_K1)
    require_finite(out, "storage_integral")
    return out


def _mode_windows(schedule: ControlSchedule, pulse: InputPulse,
                  grid: SimulationGrid) -> list[tuple[float, float]]:
    """Equal-Gaussian-tail boundaries between consecutive bins."""
    centers = [pulse.center] + [p.tau for p in schedule.readout]
    widths = [pulse.width] + [p.T for p in schedule.readout]
    bounds = [grid.tau_min]
    for (c1_, w1), (c2_, w2) in zip(zip(centers, widths),
                                    zip(centers[1:], widths[1:])):
        bounds.append((c1_ * w2 + c2_ * w1) / (w1 + w2))
    bounds.append(grid.tau_max)
    return [(bounds[i], bounds[i + 1]) for i in range(len(centers))]


def mode_profiles(
    cfg: MediumConfig,
    pulse: InputPulse,
    schedule: ControlSchedule,
    grid: SimulationGrid,
    zeta: float = 1.0,
    overlap_tol: float = 1e-3,
) -> OutputState:
    """Profiles of all J+1 temporal modes (occupations not yet filled).

    Raises :class:`ModeOverlapError` when any normalized mode overlap
    reaches ``overlap_tol`` - the bins are then not meaningful.  Window
    leakage (profile weight outside the bin) is reported per mode and
    flagged beyond 1e-4 of the peak.
    """
    _validate_schedule(cfg, schedule)
    d = derive_couplings(cfg)
    tau = grid.tau
    stor = storage_integral(cfg, pulse, schedule, grid, zeta)
    f = pulse.sample(grid)
    pref = 2.0 * d.c1 * zeta
    profiles = [f - pref * schedule.switch_envelope(tau) * stor]
    signs = [1]
    for p in schedule.readout:
        rel = p.amp / schedule.cw_level
        profiles.append(-pref * rel * p.envelope(tau) * stor)
        signs.append(1 if p.amp >= 0 else -1)

    msgs = list(schedule.warnings())
    windows = _mode_windows(schedule, pulse, grid)
    modes = []
    for i, prof in enumerate(profiles):
        lo, hi = windows[i]
        inside = (tau >= lo) & (tau <= hi)
        peak = np.abs(prof).max()
        leak = 0.0
        if peak > 0:
            outside = np.abs(prof[~inside])
            leak = float(outside.max() / peak) if outside.size else 0.0
        if leak > 1e-4:
            msgs.append(
                f"mode {i}: profile reaches {leak:.2e} of its peak outside "
                f"its window [{lo:g}, {hi:g}]")
        modes.append(TemporalMode(index=i, profile=prof, window=(lo, hi),
                                  sign=signs[i], leakage=leak))

    overlaps = _overlap_matrix(modes, grid.dtau)
    off = overlaps[~np.eye(len(modes), dtype=bool)]
    if off.size and off.max() >= overlap_tol:
        raise ModeOverlapError(
            f"temporal modes overlap: max normalized overlap "
            f"{off.max():.3e} >= {overlap_tol:g}")

    diag = {
        "stark_phase_per_readout": tuple(
            p.amp ** 2 * cfg.delta_over_gamma * cfg.gamma_T * p.T
            for p in schedule.readout),
    }
    for i, v in enumerate(diag["stark_phase_per_readout"]):
        if v >= 0.5:
            msgs.append(
                f"readout {i + 1}: Stark phase {v:.3g} rad is not small; "
                "the zero-detuning mode profiles degrade")
    for m in msgs:
        warnings.warn(m, stacklevel=2)
    return OutputState(tau=tau, modes=tuple(modes), overlaps=overlaps,
                       diagnostics=diag, warnings=tuple(msgs))


def _overlap_matrix(modes, dtau: float) -> np.ndarray:
    k = len(modes)
    norms = [math.sqrt(abs(integrate_samples(np.abs(m.profile) ** 2, dtau)))
             for m in modes]
    out = np.eye(k)
    for i in range(k):
        for j in range(i + 1, k):
            if norms[i] == 0 or norms[j] == 0:
                val = 0.0
            else:
                inner = integrate_samples(
                    np.conj(modes[i].profile) * modes[j].profile, dtau)
                val = abs(inner) / (norms[i] * norms[j])
            out[i, j] = out[j, i] = val
    return out


def mode_amplitudes(state: OutputState) -> OutputState:
    """Fill occupations n_i = r_i^2 = int |Phi_i|^2 dtau and their sum."""
    dtau = state.dtau
    modes = []
    for m in state.modes:
        n = float(integrate_samples(np.abs(m.profile) ** 2, dtau).real)
        modes.append(replace(m, r=math.sqrt(n), n=n))
    total = sum(m.n for m in modes)
    msgs = list(state.warnings)
    if abs(total - 1.0) > 0.05:
        msgs.append(
            f"occupations sum to {total:.4f}; losses or window truncation "
            "account for the deficit")
        warnings.warn(msgs[-1], stacklevel=2)
    return replace(state, modes=tuple(modes), total=total,
                   warnings=tuple(msgs))


def check_orthogonality(state: OutputState,
                        eps: float = 1e-3) -> tuple[np.ndarray, bool]:
    """Normalized overlap matrix and whether all off-diagonals stay below
    ``eps`` (report only; no exception)."""
    off = state.overlaps[~np.eye(len(state.modes), dtype=bool)]
    ok = bool(off.size == 0 or off.max() < eps)
    return state.overlaps, ok


def decomposition_residual(state: OutputState, direct: TimeSeries) -> float:
    """Max-norm mismatch between the summed modes and a direct propagation
    of the full schedule, relative to the direct field's peak."""
    diff = np.abs(state.summed_profile() - direct.values).max()
    return float(diff / np.abs(direct.values).max())


def equalize_readout_pair(
    cfg: MediumConfig,
    pulse: InputPulse,
    schedule: ControlSchedule,
    grid: SimulationGrid,
    first: int = 0,
    second: int = 1,
    zeta: float = 1.0,
    tol: float = 1e-3,
    max_iter: int = 60,
) -> tuple[float, OutputState]:
    """Scale readout ``first`` so that its occupation matches ``second``.

    Bisection on the amplitude scale: lowering the earlier pulse both
    reduces its own occupation and leaves more excitation for the later
    one, so the occupation difference is monotone in the scale.  Returns
    the final amplitude ratio amp_first/amp_second and the equalized state.
    """
    pulses = list(schedule.readout)
    if not (0 <= first < len(pulses) and 0 <= second < len(pulses)):
        raise ConfigError("readout indices out of range")
    base_amp = pulses[first].amp

    def occupations(scale: float) -> tuple[float, float, OutputState]:
        mod = list(pulses)
        mod[first] = ReadoutPulse(tau=pulses[first].tau, T=pulses[first].T,
                                  amp=base_amp * scale)
        sched = ControlSchedule(cw_level=schedule.cw_level,
                                switch_off=schedule.switch_off,
                                readout=tuple(mod),
                                separation_factor=schedule.separation_factor)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            st = mode_amplitudes(mode_profiles(cfg, pulse, sched, grid, zeta))
        return st.modes[first + 1].n, st.modes[second + 1].n, st

    lo, hi = 0.0, 1.0
    n1, n2, state = occupations(hi)
    if n1 < n2:  # already below target at full amplitude; widen upward
        hi = 2.0
        n1, n2, state = occupations(hi)
    mid = hi
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        n1, n2, state = occupations(mid)
        if abs(n1 - n2) <= tol * max(n1, n2, 1e-300):
            break
        if n1 > n2:
            hi = mid
        else:
            lo = mid
    return float(base_amp * mid / pulses[second].amp), state
