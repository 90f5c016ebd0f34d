import math

import pytest

from zeropi import (ControlSchedule, InputPulse, MediumConfig, ReadoutPulse,
                    SimulationGrid, SwitchOff, cw_schedule)

GAMMA_T = 7.2
DELTA_OVER_GAMMA = 20.0


def medium(omega=0.1, alpha_l=3.5, **kw):
    return MediumConfig(gamma_T=GAMMA_T, delta_over_gamma=DELTA_OVER_GAMMA,
                        omega0_over_delta=omega, alpha_L=alpha_l, **kw)


@pytest.fixture
def pulse():
    return InputPulse()


@pytest.fixture
def fig2_cfg():
    return medium(0.1, 3.5)  # c1 = 0.126


@pytest.fixture
def fig3_cfg():
    return medium(0.1, 125.0 / 36.0)  # c1 = 0.125


@pytest.fixture
def fig4_cfg():
    return medium(0.1, 1000.0 / 7.2)  # c1 = 5.0


@pytest.fixture
def fig5_cfg():
    return medium(0.05, 125.0 / 90.0)  # c1 = 0.0125


@pytest.fixture
def fig5_schedule():
    t_read = 1.0 / math.sqrt(2.0)
    return ControlSchedule(
        cw_level=0.05,
        switch_off=SwitchOff(tau0=0.0, T0=1.5),
        readout=(ReadoutPulse(tau=4.0, T=t_read, amp=0.05),
                 ReadoutPulse(tau=7.0, T=t_read, amp=0.05)))


@pytest.fixture
def fig5_grid():
    return SimulationGrid(-6.0, 12.0, 1801)


@pytest.fixture
def grid_std():
    return SimulationGrid(-6.0, 34.0, 2001)


@pytest.fixture
def cw01():
    return cw_schedule(0.1)
