"""Config-file parsing, CSV emission and the binary field dump.

Config files are flat ``key = value`` text (UTF-8, ``#`` comments).  Keys:

    gamma_T, delta_over_gamma, omega0_over_delta, alpha_L,
    raman_detuning_T, ct_over_L, k_L, gamma0_T,
    tau_min, tau_max, n_tau, z_fractions,
    control.cw_level, control.switch_tau0, control.switch_T0,
    control.readout, control.absorb_stark

``z_fractions`` is a comma list; ``control.readout`` is a Python-literal
list of (tau, T, amp) triples.  Unknown keys are errors (with the line
number).  All numeric output uses 12 significant digits so repeated runs
are byte-identical.
"""

from __future__ import annotations

import ast
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .config import MediumConfig, SimulationGrid
from .control import ControlSchedule, ReadoutPulse, SwitchOff
from .errors import ConfigError
from .propagator import TimeSeries

__all__ = [
    "ParsedConfig",
    "parse_config_text",
    "load_config",
    "format_config",
    "write_timeseries_csv",
    "read_timeseries_csv",
    "write_summary",
    "write_rows_csv",
    "dump_field_binary",
    "load_field_binary",
    "compare_timeseries",
]

_MEDIUM_KEYS = ("gamma_T", "delta_over_gamma", "omega0_over_delta",
                "alpha_L", "raman_detuning_T", "ct_over_L", "k_L",
                "gamma0_T")
_GRID_KEYS = ("tau_min", "tau_max", "n_tau", "z_fractions")
_CONTROL_KEYS = ("control.cw_level", "control.switch_tau0",
                 "control.switch_T0", "control.readout",
                 "control.absorb_stark")
_ALL_KEYS = frozenset(_MEDIUM_KEYS + _GRID_KEYS + _CONTROL_KEYS)

_DEFAULTS = {
    "raman_detuning_T": 0.0,
    "ct_over_L": 2000.0,
    "k_L": 0.0,
    "gamma0_T": 0.0,
    "z_fractions": (1.0,),
    "control.absorb_stark": False,
}


@dataclass(frozen=True)
class ParsedConfig:
    """Fully validated configuration bundle from a config file."""

    medium: MediumConfig
    schedule: ControlSchedule
    grid: SimulationGrid
    absorb_stark: bool


def parse_config_text(text: str) -> dict:
    """Raw ``key -> value`` mapping; raises ConfigError with line numbers."""
    out: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw!r}",
                              line=lineno)
        key, _, val = line.partition("=")
        key = key.strip()
        val = val.strip()
        if key not in _ALL_KEYS:
            raise ConfigError(f"unknown key {key!r}", line=lineno)
        if key in out:
            raise ConfigError(f"duplicate key {key!r}", line=lineno)
        try:
            out[key] = _convert(key, val)
        except (ValueError, SyntaxError) as exc:
            raise ConfigError(f"bad value for {key!r}: {exc}",
                              line=lineno) from None
    return out


def _convert(key: str, val: str):
    if key == "n_tau":
        return int(val)
    if key == "z_fractions":
        return tuple(float(v) for v in val.split(","))
    if key == "control.absorb_stark":
        low = val.lower()
        if low not in ("true", "false"):
            raise ValueError("expected true or false")
        return low == "true"
    if key == "control.readout":
        parsed = ast.literal_eval(val)
        pulses = []
        for item in parsed:
            tau, width, amp = (float(x) for x in item)
            pulses.append((tau, width, amp))
        return tuple(pulses)
    return float(val)


def load_config(path: str | Path) -> ParsedConfig:
    """Parse and validate a config file into typed objects."""
    raw = parse_config_text(Path(path).read_text(encoding="utf-8"))
    vals = dict(_DEFAULTS)
    vals.update(raw)
    missing = [k for k in _MEDIUM_KEYS + _GRID_KEYS[:3] if k not in vals]
    if missing:
        raise ConfigError(f"missing required keys: {', '.join(missing)}")
    medium = MediumConfig(**{k: vals[k] for k in _MEDIUM_KEYS})
    grid = SimulationGrid(tau_min=vals["tau_min"], tau_max=vals["tau_max"],
                          n_tau=vals["n_tau"],
                          z_fractions=tuple(vals["z_fractions"]))
    cw = vals.get("control.cw_level", medium.omega0_over_delta)
    if not math.isclose(cw, medium.omega0_over_delta, rel_tol=1e-12,
                        abs_tol=0.0) and cw != 0.0:
        raise ConfigError(
            f"control.cw_level={cw!r} disagrees with "
            f"omega0_over_delta={medium.omega0_over_delta!r}")
    switch = None
    if "control.switch_tau0" in vals or "control.switch_T0" in vals:
        if not ("control.switch_tau0" in vals
                and "control.switch_T0" in vals):
            raise ConfigError("switch-off needs both control.switch_tau0 "
                              "and control.switch_T0")
        switch = SwitchOff(tau0=vals["control.switch_tau0"],
                           T0=vals["control.switch_T0"])
    readout = tuple(ReadoutPulse(tau=t, T=w, amp=a)
                    for t, w, a in vals.get("control.readout", ()))
    schedule = ControlSchedule(cw_level=cw, switch_off=switch,
                               readout=readout)
    return ParsedConfig(medium=medium, schedule=schedule, grid=grid,
                        absorb_stark=vals["control.absorb_stark"])


def format_config(parsed: ParsedConfig, header: str = "") -> str:
    """Render a config bundle back to file text (round-trips loadable)."""
    m, g, s = parsed.medium, parsed.grid, parsed.schedule
    lines = []
    if header:
        lines.extend(f"# {h}" for h in header.splitlines())
    for k in _MEDIUM_KEYS:
        lines.append(f"{k} = {_fmt_exact(getattr(m, k))}")
    lines.append(f"tau_min = {_fmt_exact(g.tau_min)}")
    lines.append(f"tau_max = {_fmt_exact(g.tau_max)}")
    lines.append(f"n_tau = {g.n_tau}")
    lines.append("z_fractions = "
                 + ", ".join(_fmt_exact(z) for z in g.z_fractions))
    lines.append(f"control.cw_level = {_fmt_exact(s.cw_level)}")
    if s.switch_off is not None:
        lines.append(f"control.switch_tau0 = {_fmt_exact(s.switch_off.tau0)}")
        lines.append(f"control.switch_T0 = {_fmt_exact(s.switch_off.T0)}")
    if s.readout:
        triples = ", ".join(
            f"({_fmt_exact(p.tau)}, {_fmt_exact(p.T)}, {_fmt_exact(p.amp)})"
            for p in s.readout)
        lines.append(f"control.readout = [{triples}]")
    lines.append("control.absorb_stark = "
                 + ("true" if parsed.absorb_stark else "false"))
    return "\n".join(lines) + "\n"


def _fmt(v: float) -> str:
    return f"{v:.12g}"


def _fmt_exact(v: float) -> str:
    return repr(float(v))


def write_timeseries_csv(path: str | Path, ts: TimeSeries) -> None:
    """CSV with header tau_over_T,re_phi,im_phi,intensity (12 digits)."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("tau_over_T,re_phi,im_phi,intensity\n")
        for t, v in zip(ts.tau, ts.values):
            inten = v.real * v.real + v.imag * v.imag
            fh.write(f"{t:.12g},{v.real:.12g},{v.imag:.12g},{inten:.12g}\n")


def read_timeseries_csv(path: str | Path, zeta: float = 0.0) -> TimeSeries:
    data = np.genfromtxt(path, delimiter=",", skip_header=1)
    if data.ndim != 2 or data.shape[1] != 4:
        raise ConfigError(f"{path}: not a field CSV")
    return TimeSeries(zeta=zeta, tau=data[:, 0],
                      values=data[:, 1] + 1j * data[:, 2])


def write_rows_csv(path: str | Path, header: str, rows) -> None:
    """Generic CSV writer: ``rows`` iterates over tuples of numbers."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(_fmt(float(v)) if not isinstance(v, (int, np.integer))
                              else str(int(v)) for v in row) + "\n")


def write_summary(path: str | Path, entries: dict) -> None:
    """Flat ``key = value`` report, keys sorted, values at 12 digits."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for key in sorted(entries):
            val = entries[key]
            if isinstance(val, float):
                val = _fmt(val)
            fh.write(f"{key} = {val}\n")


def dump_field_binary(path: str | Path, zetas: np.ndarray, tau: np.ndarray,
                      phi: np.ndarray, s: np.ndarray) -> None:
    """Binary dump of a 2-D marched field, little-endian throughout.

    Layout: two uint64 (n_rows = stored depths, n_cols = time nodes),
    then n_rows float64 depth fractions, n_cols float64 times, then the
    field and the coherence as row-major (re, im) float64 pairs.
    """
    with open(path, "wb") as fh:
        fh.write(np.asarray([phi.shape[0], phi.shape[1]],
                            dtype="<u8").tobytes())
        fh.write(np.asarray(zetas, dtype="<f8").tobytes())
        fh.write(np.asarray(tau, dtype="<f8").tobytes())
        for arr in (phi, s):
            inter = np.empty((arr.shape[0], arr.shape[1], 2), dtype="<f8")
            inter[..., 0] = arr.real
            inter[..., 1] = arr.imag
            fh.write(inter.tobytes())


def load_field_binary(path: str | Path):
    raw = Path(path).read_bytes()
    nz, nt = np.frombuffer(raw[:16], dtype="<u8")
    nz, nt = int(nz), int(nt)
    off = 16
    zetas = np.frombuffer(raw[off:off + 8 * nz], dtype="<f8").copy()
    off += 8 * nz
    tau = np.frombuffer(raw[off:off + 8 * nt], dtype="<f8").copy()
    off += 8 * nt
    out = []
    for _ in range(2):
        flat = np.frombuffer(raw[off:off + 16 * nz * nt], dtype="<f8")
        pair = flat.reshape(nz, nt, 2)
        out.append(pair[..., 0] + 1j * pair[..., 1])
        off += 16 * nz * nt
    return zetas, tau, out[0], out[1]


def compare_timeseries(a: TimeSeries, b: TimeSeries) -> dict:
    """Max-norm and L2 differences of two series on matching grids."""
    if a.tau.shape != b.tau.shape or not np.allclose(
            a.tau, b.tau, rtol=1e-9, atol=1e-9):
        raise ConfigError("grids do not match")
    diff = a.values - b.values
    dtau = a.dtau
    l2 = math.sqrt(float(np.sum(np.abs(diff) ** 2) * dtau))
    return {
        "max_abs_diff": float(np.abs(diff).max()),
        "l2_diff": l2,
        "max_abs_intensity_diff": float(
            np.abs(np.abs(a.values) ** 2 - np.abs(b.values) ** 2).max()),
    }
