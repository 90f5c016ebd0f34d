"""Dimensionless parameter set of the medium, input pulse and grids.

Unit system: times in units of the input pulse duration T, depth as the
fraction zeta = z/L of the medium length.  Only dimensionless groups enter:
gamma*T, Delta/gamma, Omega0/Delta, alpha*L, delta_R*T, c*T/L, k*L, gamma0*T.
Every downstream formula is expressed through the derived couplings below,
chiefly ``c1 = (alpha*L/2) * gamma*T * (Omega0/Delta)**2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError

__all__ = [
    "MediumConfig",
    "DerivedCouplings",
    "InputPulse",
    "SimulationGrid",
    "derive_couplings",
    "check_regime",
]


@dataclass(frozen=True)
class MediumConfig:
    """Physical parameters of the atomic medium, all dimensionless.

    gamma_T            - spontaneous decay rate times pulse duration (gamma*T)
    delta_over_gamma   - one-photon detuning Delta/gamma
    omega0_over_delta  - cw control Rabi frequency over detuning, Omega0/Delta
    alpha_L            - resonant optical depth over the medium length
    raman_detuning_T   - two-photon (Raman) detuning delta_R*T, any sign
    ct_over_L          - pulse length to medium length ratio (diagnostics only)
    k_L                - linear absorption depth (loss term of the reference
                         integrator only)
    gamma0_T           - Raman coherence damping rate times T
    """

    gamma_T: float
    delta_over_gamma: float
    omega0_over_delta: float
    alpha_L: float
    raman_detuning_T: float = 0.0
    ct_over_L: float = 2000.0
    k_L: float = 0.0
    gamma0_T: float = 0.0

    def __post_init__(self) -> None:
        for name in ("gamma_T", "delta_over_gamma", "omega0_over_delta",
                     "alpha_L", "raman_detuning_T", "ct_over_L", "k_L",
                     "gamma0_T"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ConfigError(f"{name} must be finite, got {v!r}")
            if name != "raman_detuning_T" and v < 0:
                raise ConfigError(f"{name} must be >= 0, got {v!r}")


@dataclass(frozen=True)
class DerivedCouplings:
    """Couplings derived from a :class:`MediumConfig`.

    c1           - kernel coupling (alpha*L/2) * gamma*T * (Omega0/Delta)**2;
                   the argument of the retrieval kernel is
                   psi = 2*sqrt(c1 * zeta * dW)
    gamma_pump_T - optical pumping rate times T, (gamma*T/2)*(Omega0/Delta)**2
    alpha_L      - optical depth, copied for convenience
    stark_T      - control-field Stark shift times T,
                   gamma*T * (Delta/gamma) * (Omega0/Delta)**2
    """

    c1: float
    gamma_pump_T: float
    alpha_L: float
    stark_T: float


def derive_couplings(cfg: MediumConfig) -> DerivedCouplings:
    """Compute the derived couplings for ``cfg``.

    ``gamma_pump_T / c1 == 1/alpha_L`` exactly, which is what makes the pump
    rate cancel from the area-law exponent.
    """
    r2 = cfg.omega0_over_delta ** 2
    return DerivedCouplings(
        c1=0.5 * cfg.alpha_L * cfg.gamma_T * r2,
        gamma_pump_T=0.5 * cfg.gamma_T * r2,
        alpha_L=cfg.alpha_L,
        stark_T=cfg.gamma_T * cfg.delta_over_gamma * r2,
    )


def check_regime(
    cfg: MediumConfig,
    threshold: float = 0.5,
    advisory_threshold: float = 0.1,
    total_detuning_T: float | None = None,
) -> list[str]:
    """Check the validity conditions of the linearized far-detuned model.

    Returns one message per violated condition; an empty list means the
    configuration sits comfortably inside the regime.  ``threshold`` gates
    hard warnings for the "much smaller than one" conditions, a stricter
    ``advisory_threshold`` adds advisory notes.  ``total_detuning_T``, when
    given, is checked against 1 for runs that assume two-photon resonance.
    """
    msgs: list[str] = []
    d = derive_couplings(cfg)

    def _check(name: str, value: float) -> None:
        if value >= threshold:
            msgs.append(f"warning: {name}={value:.6g} >= {threshold:g} "
                        "(must be small)")
        elif value > advisory_threshold:
            msgs.append(f"advisory: {name}={value:.6g} > "
                        f"{advisory_threshold:g}")

    _check("k_L", cfg.k_L)
    _check("gamma_pump_T", d.gamma_pump_T)
    _check("omega0_over_delta", cfg.omega0_over_delta)
    inv_detuning = (math.inf if cfg.delta_over_gamma == 0
                    else 1.0 / cfg.delta_over_gamma)
    _check("gamma_over_delta", inv_detuning)
    if total_detuning_T is not None and abs(total_detuning_T) >= 1.0:
        msgs.append(
            f"warning: |total_detuning_T|={abs(total_detuning_T):.6g} >= 1 "
            "but two-photon resonance was requested")
    return msgs


@dataclass(frozen=True)
class InputPulse:
    """Input photon wave-packet profile f(tau), normalized to unit norm.

    The normalization is int |f|^2 dtau = 1 on the simulation grid's time
    axis (times in units of T), so the input photon number is one.  For the
    Gaussian shape, f(tau) = A*exp(-(tau-center)**2/width**2) with
    A = (2/pi)**0.25 / sqrt(width).
    """

    shape: str = "gaussian"
    center: float = 0.0
    width: float = 1.0
    samples: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        if self.shape not in ("gaussian", "custom"):
            raise ConfigError(f"unknown pulse shape {self.shape!r}")
        if self.shape == "gaussian":
            if not (math.isfinite(self.center) and self.width > 0):
                raise ConfigError("gaussian pulse needs finite center and "
                                  "width > 0")
        elif self.samples is None:
            raise ConfigError("custom pulse requires samples")

    def sample(self, grid: "SimulationGrid") -> np.ndarray:
        """Normalized complex samples of f on the grid (unit L2 norm)."""
        tau = grid.tau
        if self.shape == "gaussian":
            amp = (2.0 / math.pi) ** 0.25 / math.sqrt(self.width)
            f = amp * np.exp(-((tau - self.center) / self.width) ** 2)
            f = f.astype(complex)
        else:
            f = np.asarray(self.samples, dtype=complex)
            if f.shape != tau.shape:
                raise ConfigError(
                    f"custom pulse has {f.size} samples, grid has {tau.size}")
            norm2 = _simpson_uniform(np.abs(f) ** 2, grid.dtau)
            if norm2 <= 0:
                raise ConfigError("custom pulse has zero norm")
            f = f / math.sqrt(norm2)
        return f

    def check_support(self, grid: "SimulationGrid",
                      rtol: float = 1e-8) -> None:
        """Raise unless |f| has decayed below rtol*max at the window edges."""
        f = np.abs(self.sample(grid))
        peak = f.max()
        if peak == 0:
            return
        if f[0] > rtol * peak or f[-1] > rtol * peak:
            raise ConfigError(
                "input pulse not supported in the simulation window: "
                f"edge amplitudes ({f[0]:.3e}, {f[-1]:.3e}) exceed "
                f"{rtol:g} * peak")


@dataclass(frozen=True)
class SimulationGrid:
    """Uniform time grid (units of T) plus requested output depths."""

    tau_min: float
    tau_max: float
    n_tau: int
    z_fractions: tuple[float, ...] = (1.0,)

    def __post_init__(self) -> None:
        if not self.tau_max > self.tau_min:
            raise ConfigError("tau_max must exceed tau_min")
        if self.n_tau < 2:
            raise ConfigError("n_tau must be >= 2")
        for z in self.z_fractions:
            if not 0.0 <= z <= 1.0:
                raise ConfigError(f"z fraction {z!r} outside [0, 1]")

    @property
    def dtau(self) -> float:
        return (self.tau_max - self.tau_min) / (self.n_tau - 1)

    @property
    def tau(self) -> np.ndarray:
        return self.tau_min + self.dtau * np.arange(self.n_tau)

    def index_of(self, tau_value: float, tol: float = 1e-9) -> int:
        """Index of the grid node at ``tau_value`` (must lie on the grid)."""
        pos = (tau_value - self.tau_min) / self.dtau
        idx = round(pos)
        if not 0 <= idx < self.n_tau or abs(pos - idx) > tol:
            raise ConfigError(f"tau={tau_value!r} is not a grid node")
        return idx


def _simpson_uniform(y: np.ndarray, dx: float) -> float:
    """Composite Simpson on a uniform grid (3/8 block absorbs odd counts)."""
    from .special import integrate_samples

    return integrate_samples(y, dx)
