import math

import numpy as np
import pytest

from zeropi import (GridResolutionError, InputPulse, SimulationGrid,
                    cw_schedule, integrate_samples, propagate_field)
from zeropi import oracle
from conftest import medium


def small_grid(n=2001):
    return SimulationGrid(-6.0, 14.0, n)


def test_decoupled_when_control_off(pulse):
    cfg = medium(0.0, 3.5)
    grid = small_grid()
    fld = oracle.integrate(cfg, cw_schedule(0.0), pulse, grid, n_zeta=100,
                           absorb_stark=True)
    f = pulse.sample(grid)
    assert np.abs(fld.field_at(1.0) - f).max() < 1e-14
    assert np.abs(fld.s).max() == 0.0


def test_matches_kernel_on_reference_configuration(fig2_cfg, pulse, cw01):
    grid = small_grid()
    fld = oracle.integrate(fig2_cfg, cw01, pulse, grid, n_zeta=200,
                           absorb_stark=True)
    ts = propagate_field(fig2_cfg, cw01, pulse, grid, 1.0, absorb_stark=True)
    peak = np.abs(pulse.sample(grid)).max()
    assert np.abs(fld.field_at(1.0) - ts.values).max() / peak < 1e-3


def test_coherence_purely_imaginary_on_resonance(fig2_cfg, pulse, cw01):
    fld = oracle.integrate(fig2_cfg, cw01, pulse, small_grid(), n_zeta=100,
                           absorb_stark=True)
    s = fld.coherence_at(1.0)
    assert np.abs(s.real).max() <= 1e-8 * np.abs(s).max()


def test_slow_photon_delay_from_march(fig4_cfg, pulse):
    grid = SimulationGrid(-6.0, 34.0, 4001)
    fld = oracle.integrate(fig4_cfg, cw_schedule(0.1), pulse, grid,
                           n_zeta=1000, delta_total_T=5.0, store_every=1000)
    ii = np.abs(fld.field_at(1.0)) ** 2
    f2 = np.abs(pulse.sample(grid)) ** 2
    tau = grid.tau
    delay = (integrate_samples(tau * ii, grid.dtau)
             / integrate_samples(ii, grid.dtau)
             - integrate_samples(tau * f2, grid.dtau)
             / integrate_samples(f2, grid.dtau))
    assert delay == pytest.approx(0.2, abs=0.05)


def test_lossless_conservation(fig2_cfg, pulse, cw01):
    grid = small_grid()
    fld = oracle.integrate(fig2_cfg, cw01, pulse, grid, n_zeta=200,
                           absorb_stark=True)
    n_out = integrate_samples(np.abs(fld.field_at(1.0)) ** 2, grid.dtau)
    trapped = integrate_samples(np.abs(fld.s_end) ** 2, 1.0 / fld.n_zeta)
    assert n_out + trapped == pytest.approx(1.0, abs=0.01)


def test_loss_terms_remove_photons(fig2_cfg, pulse, cw01):
    grid = small_grid()
    pump_only = oracle.integrate(fig2_cfg, cw01, pulse, grid, n_zeta=100,
                                 absorb_stark=True, with_losses=True)
    lossy_cfg = medium(0.1, 3.5, k_L=0.05)
    lossy = oracle.integrate(lossy_cfg, cw01, pulse, grid, n_zeta=100,
                             absorb_stark=True, with_losses=True)
    free = oracle.integrate(fig2_cfg, cw01, pulse, grid, n_zeta=100,
                            absorb_stark=True)
    n_free = integrate_samples(np.abs(free.field_at(1.0)) ** 2, grid.dtau)
    n_pump = integrate_samples(np.abs(pump_only.field_at(1.0)) ** 2,
                               grid.dtau)
    n_lossy = integrate_samples(np.abs(lossy.field_at(1.0)) ** 2, grid.dtau)
    # optical pumping alone eats roughly the stored fraction
    assert n_pump < n_free
    # linear absorption scales the output by about exp(-2 k_L) on top
    assert n_lossy / n_pump == pytest.approx(math.exp(-2 * 0.05), rel=0.05)


def test_resolution_preconditions(fig2_cfg, pulse, cw01):
    coarse = SimulationGrid(-6.0, 14.0, 201)
    with pytest.raises(GridResolutionError):
        oracle.integrate(fig2_cfg, cw01, pulse, coarse, n_zeta=100)
    with pytest.raises(GridResolutionError):
        oracle.integrate(fig2_cfg, cw01, pulse, small_grid(), n_zeta=10)
    # detuning tightens the time step requirement
    with pytest.raises(GridResolutionError):
        oracle.integrate(fig2_cfg, cw01, pulse, small_grid(), n_zeta=100,
                         delta_total_T=50.0)


def test_convergence_smooth_case(fig2_cfg, pulse, cw01):
    cv = oracle.convergence_study(fig2_cfg, cw01, pulse,
                                  SimulationGrid(-6.0, 14.0, 501),
                                  n_zeta=25, levels=4, absorb_stark=True)
    assert cv.monotone
    for o in cv.orders:
        assert o == pytest.approx(2.0, abs=0.3)


def test_convergence_decoupled_case(pulse):
    cfg = medium(0.0, 3.5)
    cv = oracle.convergence_study(cfg, cw_schedule(0.0), pulse,
                                  SimulationGrid(-6.0, 14.0, 501),
                                  n_zeta=25, levels=3, absorb_stark=True)
    assert all(d < 1e-14 for d in cv.diffs)


def test_convergence_timebin_schedule(fig5_cfg, pulse, fig5_schedule):
    cv = oracle.convergence_study(fig5_cfg, fig5_schedule, pulse,
                                  SimulationGrid(-6.0, 12.0, 451),
                                  n_zeta=25, levels=3, absorb_stark=True)
    assert cv.observed_order >= 1.8
    assert cv.monotone


def test_field_at_requires_stored_slice(fig2_cfg, pulse, cw01):
    fld = oracle.integrate(fig2_cfg, cw01, pulse, small_grid(), n_zeta=100,
                           store_every=100)
    with pytest.raises(ValueError):
        fld.field_at(0.515)
