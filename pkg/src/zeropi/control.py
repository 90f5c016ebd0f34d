"""Control-field envelope and its cumulative tables.

The control Rabi frequency (in units of the one-photon detuning) is

    omega(tau) = cw_level * f0(tau - tau0) + sum_i amp_i * g_i(tau - tau_i)

with the tanh switch-off f0(u) = (tanh(-u/T0) + 1)/2 and Gaussian readout
pulses g_i(u) = exp(-u^2/T_i^2).  Without a switch-off, f0 == 1 (pure cw).

Two cumulative tables feed the propagation kernels:

    W(tau) = int (omega/cw_level)^2 dx   (control pulse energy)
    D(tau) = int delta_tot(x)*T dx       (two-photon phase)

both accumulated with the trapezoid rule on the simulation grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .config import DerivedCouplings, SimulationGrid
from .errors import ConfigError

__all__ = ["SwitchOff", "ReadoutPulse", "ControlSchedule", "CumulativeTables",
           "build_tables"]


@dataclass(frozen=True)
class SwitchOff:
    """Smooth turn-off of the cw control at tau0 with time constant T0."""

    tau0: float
    T0: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.tau0) and self.T0 > 0):
            raise ConfigError("switch-off needs finite tau0 and T0 > 0")

    def envelope(self, tau):
        return 0.5 * (np.tanh(-(tau - self.tau0) / self.T0) + 1.0)


@dataclass(frozen=True)
class ReadoutPulse:
    """Gaussian readout pulse; ``amp`` (Omega_i/Delta) may be negative."""

    tau: float
    T: float
    amp: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.tau) and self.T > 0
                and math.isfinite(self.amp)):
            raise ConfigError("readout pulse needs finite tau/amp and T > 0")

    def envelope(self, tau):
        return np.exp(-((tau - self.tau) / self.T) ** 2)


@dataclass(frozen=True)
class ControlSchedule:
    """Piecewise-analytic control schedule.

    ``cw_level`` is Omega0/Delta.  Readout pulses must be strictly ordered in
    time and come after the switch-off center; pulses closer than
    ``separation_factor * (T_i + T_{i+1})`` are flagged in :meth:`warnings`
    (the hard orthogonality gate lives in the time-bin decomposition, which
    measures actual mode overlaps).
    """

    cw_level: float
    switch_off: SwitchOff | None = None
    readout: tuple[ReadoutPulse, ...] = ()
    phase: object | None = field(default=None, repr=False)
    separation_factor: float = 3.0

    def __post_init__(self) -> None:
        if not math.isfinite(self.cw_level) or self.cw_level < 0:
            raise ConfigError("cw_level must be finite and >= 0")
        times = [p.tau for p in self.readout]
        if any(t2 <= t1 for t1, t2 in zip(times, times[1:])):
            raise ConfigError("readout pulses must be strictly ordered")
        if self.readout and self.switch_off is not None:
            if times[0] <= self.switch_off.tau0:
                raise ConfigError("readout pulses must follow the switch-off")

    def warnings(self) -> list[str]:
        msgs = []
        for p1, p2 in zip(self.readout, self.readout[1:]):
            gap = p2.tau - p1.tau
            need = self.separation_factor * (p1.T + p2.T)
            if gap < need:
                msgs.append(
                    f"readout pulses at tau={p1.tau:g} and tau={p2.tau:g} are "
                    f"separated by {gap:g} < {need:g} "
                    f"(separation factor {self.separation_factor:g})")
        return msgs

    @property
    def is_cw(self) -> bool:
        return self.switch_off is None and not self.readout

    def omega_at(self, tau):
        """Signed control amplitude Omega_c/Delta at ``tau`` (array ok)."""
        tau = np.asarray(tau, dtype=float)
        if self.switch_off is not None:
            out = self.cw_level * self.switch_off.envelope(tau)
        else:
            out = np.full_like(tau, self.cw_level)
        for p in self.readout:
            out = out + p.amp * p.envelope(tau)
        return out if out.ndim else float(out)

    def relative_envelope(self, tau):
        """omega_at / cw_level; identically zero when the cw level is zero."""
        tau = np.asarray(tau, dtype=float)
        if self.cw_level == 0.0:
            return np.zeros_like(tau) if tau.ndim else 0.0
        out = self.omega_at(tau) / self.cw_level
        return out

    def switch_envelope(self, tau):
        """The storage part f0(tau - tau0) alone (1 for a cw schedule)."""
        tau = np.asarray(tau, dtype=float)
        if self.switch_off is None:
            return np.ones_like(tau) if tau.ndim else 1.0
        out = self.switch_off.envelope(tau)
        return out if out.ndim else float(out)


def cw_schedule(cw_level: float) -> ControlSchedule:
    """Constant control field at ``cw_level``."""
    return ControlSchedule(cw_level=cw_level)


@dataclass(frozen=True)
class CumulativeTables:
    """Per-node control data on the simulation grid.

    w is non-decreasing with w[0] = 0; d accumulates the two-photon phase
    with d[0] = 0.  ``omega_rel`` is the signed envelope omega/cw_level and
    ``delta`` the instantaneous two-photon detuning (times T).
    """

    tau: np.ndarray
    omega_rel: np.ndarray
    w: np.ndarray
    delta: np.ndarray
    d: np.ndarray

    def __post_init__(self) -> None:
        if np.any(np.diff(self.w) < 0):
            raise ConfigError("W table must be non-decreasing")


def build_tables(
    schedule: ControlSchedule,
    grid: SimulationGrid,
    couplings: DerivedCouplings | None = None,
    raman_detuning_T: float = 0.0,
    absorb_stark: bool = False,
    delta_total_T: float | None = None,
) -> CumulativeTables:
    """Tabulate the control envelope and its cumulative integrals.

    The detuning is delta_R*T plus the instantaneous Stark term
    stark_T * (omega/cw)^2 unless ``absorb_stark`` is set (then the constant
    shift is assumed folded into the control frequency).  ``delta_total_T``
    overrides both with a constant total detuning, which is what the
    dispersion scan uses.
    """
    tau = grid.tau
    dtau = grid.dtau
    if dtau <= 0:
        raise ConfigError("grid must be strictly increasing")
    om = np.asarray(schedule.relative_envelope(tau), dtype=float)
    om2 = om * om
    w = _cumtrapz(om2, dtau)
    if delta_total_T is not None:
        delta = np.full_like(tau, float(delta_total_T))
    else:
        delta = np.full_like(tau, float(raman_detuning_T))
        if not absorb_stark:
            if couplings is None:
                raise ConfigError(
                    "couplings required when the Stark term is kept")
            delta = delta + couplings.stark_T * om2
    d = _cumtrapz(delta, dtau)
    return CumulativeTables(tau=tau, omega_rel=om, w=w, delta=delta, d=d)


def _cumtrapz(y: np.ndarray, dx: float) -> np.ndarray:
    out = np.zeros_like(y)
    np.cumsum(0.5 * dx * (y[1:] + y[:-1]), out=out[1:])
    return out
