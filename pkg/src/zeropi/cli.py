"""Command-line front end.

    zero-pi <subcommand> --config <path> --out <dir> [--tol <x>]
                         [--with-losses]

Subcommands: propagate, area-scan, dispersion-scan, timebins,
oracle-compare, compare, run.  Named scenarios carry embedded default
configs; ``--config`` runs a custom one.  Exit codes: 0 ok, 1 tolerance
failure, 2 config error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import io, scenarios
from .errors import ConfigError, NumericalError

_SUBCOMMAND_SCENARIOS = {
    "propagate": ("fig2_ringing", "fig3_intensity"),
    "area-scan": ("area_sweep",),
    "dispersion-scan": ("fig4_dispersion",),
    "timebins": ("fig5_timebins", "fig6_phase"),
    "oracle-compare": ("oracle_compare",),
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zero-pi",
        description="Single-photon Raman propagation: ringing, dispersion, "
                    "time-bin retrieval, reference comparison.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, scenario_choices=None):
        p.add_argument("--config", type=Path,
                       help="config file (overrides --scenario)")
        if scenario_choices:
            p.add_argument("--scenario", choices=scenario_choices,
                           default=scenario_choices[0],
                           help="named preset (default: %(default)s)")
        p.add_argument("--out", type=Path, required=True,
                       help="output directory")
        p.add_argument("--tol", type=float, default=None,
                       help="tolerance for pass/fail checks")
        p.add_argument("--with-losses", action="store_true",
                       help="enable the damping/loss terms")

    for cmd, names in _SUBCOMMAND_SCENARIOS.items():
        common(sub.add_parser(cmd), names)

    run_p = sub.add_parser("run",
                           help="run any named scenario (or 'custom')")
    run_p.add_argument("scenario",
                       choices=sorted(scenarios.SCENARIOS) + ["custom"])
    common(run_p)

    cmp_p = sub.add_parser("compare",
                           help="compare two field CSV files")
    cmp_p.add_argument("file_a", type=Path)
    cmp_p.add_argument("file_b", type=Path)
    cmp_p.add_argument("--tol", type=float, default=1e-8,
                       help="max-norm tolerance (default %(default)g)")
    cmp_p.add_argument("--norm", choices=("max", "l2"), default="max")
    return parser


def _compare(args) -> int:
    a = io.read_timeseries_csv(args.file_a)
    b = io.read_timeseries_csv(args.file_b)
    stats = io.compare_timeseries(a, b)
    for key in sorted(stats):
        print(f"{key} = {stats[key]:.12g}")
    value = stats["max_abs_diff" if args.norm == "max" else "l2_diff"]
    if value <= args.tol:
        print(f"OK {args.norm}-norm {value:.3g} <= {args.tol:g}")
        return 0
    print(f"TOLERANCE FAILURE {args.norm}-norm {value:.3g} > {args.tol:g}")
    return 1


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "compare":
            return _compare(args)
        if args.config is not None:
            name = ("oracle_custom" if args.command == "oracle-compare"
                    else "custom")
            spec = scenarios.scenario_from_config(args.config, name=name)
        elif args.command == "run" and args.scenario == "custom":
            raise ConfigError("scenario 'custom' requires --config")
        else:
            spec = scenarios.build_scenario(args.scenario)
        code = scenarios.run(spec, args.out, tol=args.tol,
                             with_losses=args.with_losses)
        report = Path(args.out) / "checks.txt"
        if report.exists():
            sys.stdout.write(report.read_text(encoding="utf-8"))
        print(f"outputs in {args.out}")
        return code
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
