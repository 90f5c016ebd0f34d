import math
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from zeropi import ConfigError, SimulationGrid, TimeSeries
from zeropi import io
from zeropi.scenarios import build_scenario

CONFIG_OK = """\
# reference parameters
gamma_T = 7.2
delta_over_gamma = 20
omega0_over_delta = 0.1
alpha_L = 3.5
tau_min = -6
tau_max = 14
n_tau = 801
z_fractions = 0.5, 1
control.cw_level = 0.1
control.absorb_stark = true
"""


def run_cli(*args):
    return subprocess.run([sys.executable, "-m", "zeropi.cli", *args],
                          capture_output=True, text=True)


def test_parse_roundtrip(tmp_path):
    p = tmp_path / "cfg.txt"
    p.write_text(CONFIG_OK, encoding="utf-8")
    parsed = io.load_config(p)
    assert parsed.medium.alpha_L == 3.5
    assert parsed.grid.z_fractions == (0.5, 1.0)
    assert parsed.absorb_stark
    q = tmp_path / "cfg2.txt"
    q.write_text(io.format_config(parsed, header="roundtrip"),
                 encoding="utf-8")
    again = io.load_config(q)
    assert again == parsed


def test_parse_errors_carry_line_numbers(tmp_path):
    p = tmp_path / "bad.txt"
    p.write_text("gamma_T = 7.2\nwhat_is_this = 1\n", encoding="utf-8")
    with pytest.raises(ConfigError, match="line 2"):
        io.load_config(p)
    p.write_text("gamma_T == 7.2\n", encoding="utf-8")
    with pytest.raises(ConfigError, match="line 1"):
        io.load_config(p)
    p.write_text(CONFIG_OK + "control.readout = [(4, 0.7)]\n",
                 encoding="utf-8")
    with pytest.raises(ConfigError, match="line 12"):
        io.load_config(p)
    p.write_text(CONFIG_OK.replace("control.cw_level = 0.1",
                                   "control.cw_level = 0.2"),
                 encoding="utf-8")
    with pytest.raises(ConfigError, match="disagrees"):
        io.load_config(p)


def test_scenario_configs_roundtrip():
    for name in ("fig2_ringing", "fig5_timebins", "area_sweep"):
        spec = build_scenario(name)
        text = io.format_config(io.ParsedConfig(
            medium=spec.medium, schedule=spec.schedule, grid=spec.grid,
            absorb_stark=spec.absorb_stark))
        raw = io.parse_config_text(text)
        assert raw["alpha_L"] == spec.medium.alpha_L


def test_timeseries_csv_roundtrip(tmp_path):
    grid = SimulationGrid(-2.0, 2.0, 41)
    values = np.exp(-grid.tau ** 2) * np.exp(0.7j * grid.tau)
    ts = TimeSeries(zeta=1.0, tau=grid.tau, values=values)
    path = tmp_path / "ts.csv"
    io.write_timeseries_csv(path, ts)
    header = path.read_text().splitlines()[0]
    assert header == "tau_over_T,re_phi,im_phi,intensity"
    back = io.read_timeseries_csv(path, zeta=1.0)
    assert np.abs(back.values - values).max() < 1e-11
    stats = io.compare_timeseries(ts, back)
    assert stats["max_abs_diff"] < 1e-11


def test_compare_rejects_mismatched_grids():
    g1 = SimulationGrid(0.0, 1.0, 11)
    g2 = SimulationGrid(0.0, 1.0, 12)
    a = TimeSeries(0.0, g1.tau, np.zeros(11, complex))
    b = TimeSeries(0.0, g2.tau, np.zeros(12, complex))
    with pytest.raises(ConfigError):
        io.compare_timeseries(a, b)


def test_binary_dump_roundtrip(tmp_path):
    zetas = np.linspace(0, 1, 3)
    tau = np.linspace(-1, 1, 5)
    phi = (np.arange(15).reshape(3, 5) + 1j).astype(complex)
    s = phi * 2.0
    path = tmp_path / "field.bin"
    io.dump_field_binary(path, zetas, tau, phi, s)
    z2, t2, p2, s2 = io.load_field_binary(path)
    np.testing.assert_array_equal(z2, zetas)
    np.testing.assert_array_equal(t2, tau)
    np.testing.assert_array_equal(p2, phi)
    np.testing.assert_array_equal(s2, s)


def test_cli_custom_run_zero_coupling(tmp_path):
    cfg = tmp_path / "zero.txt"
    cfg.write_text(CONFIG_OK.replace("omega0_over_delta = 0.1",
                                     "omega0_over_delta = 0")
                   .replace("control.cw_level = 0.1",
                            "control.cw_level = 0"),
                   encoding="utf-8")
    out = tmp_path / "out"
    r = run_cli("run", "custom", "--config", str(cfg), "--out", str(out))
    assert r.returncode == 0, r.stderr
    assert (out / "input.csv").read_bytes() \
        == (out / "field_zeta_1.csv").read_bytes()


def test_cli_compare_exit_codes(tmp_path):
    grid = SimulationGrid(0.0, 1.0, 21)
    a = TimeSeries(0.0, grid.tau, np.ones(21, complex))
    b = TimeSeries(0.0, grid.tau, np.ones(21, complex) * (1 + 2e-6))
    io.write_timeseries_csv(tmp_path / "a.csv", a)
    io.write_timeseries_csv(tmp_path / "b.csv", b)
    same = run_cli("compare", str(tmp_path / "a.csv"),
                   str(tmp_path / "a.csv"), "--tol", "1e-12")
    assert same.returncode == 0
    diff = run_cli("compare", str(tmp_path / "a.csv"),
                   str(tmp_path / "b.csv"), "--tol", "1e-8")
    assert diff.returncode == 1


def test_cli_config_error_exit_code(tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("nonsense = 1\n", encoding="utf-8")
    r = run_cli("run", "custom", "--config", str(bad),
                "--out", str(tmp_path / "o"))
    assert r.returncode == 2
    assert "line 1" in r.stderr


def test_cli_numerical_error_exit_code(tmp_path):
    # oracle resolution gate trips on a coarse grid
    cfg = tmp_path / "coarse.txt"
    cfg.write_text(CONFIG_OK.replace("n_tau = 801", "n_tau = 101"),
                   encoding="utf-8")
    r = run_cli("oracle-compare", "--config", str(cfg),
                "--out", str(tmp_path / "o"))
    assert r.returncode == 3


def test_cli_dispersion_scan_outputs(tmp_path):
    out = tmp_path / "disp"
    r = run_cli("dispersion-scan", "--out", str(out))
    assert r.returncode == 0, r.stderr
    for d in (5, 2, 1):
        assert (out / f"field_delta_{d}.csv").exists()
    assert (out / "summary.txt").exists()
    checks = (out / "checks.txt").read_text()
    assert "FAIL" not in checks


def test_cli_scale_pair_files_compare_clean(tmp_path):
    # quarter depth at the full control level vs full depth at half level
    base = CONFIG_OK.replace("n_tau = 801", "n_tau = 2001")
    cfg_a = tmp_path / "a.txt"
    cfg_a.write_text(base.replace("z_fractions = 0.5, 1",
                                  "z_fractions = 0.25"), encoding="utf-8")
    cfg_b = tmp_path / "b.txt"
    cfg_b.write_text(base.replace("omega0_over_delta = 0.1",
                                  "omega0_over_delta = 0.05")
                     .replace("control.cw_level = 0.1",
                              "control.cw_level = 0.05")
                     .replace("z_fractions = 0.5, 1", "z_fractions = 1"),
                     encoding="utf-8")
    out_a, out_b = tmp_path / "oa", tmp_path / "ob"
    assert run_cli("propagate", "--config", str(cfg_a), "--out",
                   str(out_a)).returncode == 0
    assert run_cli("propagate", "--config", str(cfg_b), "--out",
                   str(out_b)).returncode == 0
    r = run_cli("compare", str(out_a / "field_zeta_0.25.csv"),
                str(out_b / "field_zeta_1.csv"), "--tol", "1e-8")
    assert r.returncode == 0, r.stdout + r.stderr
