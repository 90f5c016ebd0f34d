"""Single-photon pulse propagation in a far-off-resonant Raman medium.

Closed-form Bessel-kernel propagation of a weak (single-photon) pulse under
a classical control field: zero-area pulse formation and ringing, slow-photon
dispersion, storage and multi-time-bin retrieval, with every closed form
cross-validated against an independent brute-force integrator of the
linearized propagation equations.
"""

from .backend import BACKEND, available_backends
from .config import (DerivedCouplings, InputPulse, MediumConfig,
                     SimulationGrid, check_regime, derive_couplings)
from .control import (ControlSchedule, CumulativeTables, ReadoutPulse,
                      SwitchOff, build_tables, cw_schedule)
from .errors import (ConfigError, GridResolutionError, ModeOverlapError,
                     NumericalError, ZeroPiError)
from .observables import (AreaRecord, LossRecord, estimate_t_out,
                          loss_diagnostic, photon_number, pulse_area,
                          ringing_duration, stored_population,
                          trapped_excitation)
from .propagator import (DispersionResult, TimeSeries, coherence,
                         dispersion_scan, intensity, propagate_field)
from .special import (bessel_j0, bessel_j1, bessel_j2, integrate,
                      integrate_samples, kernel_k1, kernel_retrieval)
from .timebins import (OutputState, TemporalMode, check_orthogonality,
                       decomposition_residual, equalize_readout_pair,
                       mode_amplitudes, mode_profiles, storage_integral)

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "available_backends",
    "MediumConfig", "DerivedCouplings", "InputPulse", "SimulationGrid",
    "derive_couplings", "check_regime",
    "ControlSchedule", "SwitchOff", "ReadoutPulse", "CumulativeTables",
    "build_tables", "cw_schedule",
    "bessel_j0", "bessel_j1", "bessel_j2", "kernel_k1", "kernel_retrieval",
    "integrate", "integrate_samples",
    "TimeSeries", "propagate_field", "intensity", "coherence",
    "dispersion_scan", "DispersionResult",
    "AreaRecord", "LossRecord", "pulse_area", "stored_population",
    "photon_number", "loss_diagnostic", "ringing_duration",
    "estimate_t_out", "trapped_excitation",
    "TemporalMode", "OutputState", "storage_integral", "mode_profiles",
    "mode_amplitudes", "check_orthogonality", "decomposition_residual",
    "equalize_readout_pair",
    "ZeroPiError", "ConfigError", "NumericalError", "GridResolutionError",
    "ModeOverlapError",
]
