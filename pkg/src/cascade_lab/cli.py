"""Command-line entry point.

Subcommands map one-to-one onto experiment kinds; a JSON config file may
supply any field and explicit flags override it.  Flag names mirror the
config field names exactly.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys

from .harness import ExperimentConfig, run


def _float_list(text: str):
    return [float(x) for x in text.split(",") if x]


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="JSON config file; flags override its fields")
    sub.add_argument("--out", dest="out_dir", help="output directory")
    sub.add_argument("--alpha", type=float, help="spectrum exponent in [5/3, 8/3]")
    sub.add_argument("--c", type=float, help="intermittency exponent in [0, 1/2]")
    sub.add_argument("--epsilon", type=float, help="energy input rate")
    sub.add_argument("--nu", type=float, help="viscosity")
    sub.add_argument("--delta", type=float, help="mollifier width")
    sub.add_argument("--grid-n", dest="grid_n", type=int, help="cells in the xi grid")
    sub.add_argument("--t-end", dest="t_end", type=float, help="rescaled time horizon")
    sub.add_argument("--cfl", type=float, help="Courant number")
    sub.add_argument("--seed", type=int, help="seed for randomized profiles")
    sub.add_argument("--profile", dest="profile_path",
                     help="two-column CSV (xi, w0) initial profile")
    sub.add_argument("--sweep-nus", dest="sweep_nus", type=_float_list,
                     help="comma-separated viscosities for sweeps")
    sub.add_argument("--sweep-deltas", dest="sweep_deltas", type=_float_list,
                     help="comma-separated mollifier widths for sweeps")
    sub.add_argument("--shell-d", dest="shell_d", type=float,
                     help="shell-model intermittency parameter")
    sub.add_argument("--shell-nu", dest="shell_nu", type=float,
                     help="shell-model viscosity")
    sub.add_argument("--shell-n", dest="shell_n", type=int,
                     help="shell-model truncation index")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cascade-lab",
        description="Experiments on the continuous energy-cascade model.")
    subs = parser.add_subparsers(dest="command", required=True)
    for name, helptext in [
        ("fixed-points", "tabulate the closed-form steady states and spectra"),
        ("inviscid", "exact variational solution and attraction report"),
        ("viscous", "finite-volume evolution of the damped Burgers equation"),
        ("leray", "regularized fixed point and characteristic traces"),
        ("shell", "dyadic shell-model steady spectrum"),
        ("sweep", "viscosity or mollifier-width sweeps"),
    ]:
        sub = subs.add_parser(name, help=helptext)
        _add_common(sub)
        if name == "sweep":
            sub.add_argument("--kind", choices=["nu", "delta"], default="nu",
                             help="sweep the viscosity or the mollifier width")
    return parser


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    if args.command == "sweep":
        kind = f"sweep-{args.kind}"
    else:
        kind = args.command
    if args.config:
        config = ExperimentConfig.from_json(args.config)
        config.kind = kind
    else:
        config = ExperimentConfig(kind=kind)
    for f in dataclasses.fields(ExperimentConfig):
        value = getattr(args, f.name, None)
        if value is not None and f.name != "kind":
            setattr(config, f.name, value)
    # --c wins over the default alpha when given on the command line
    if getattr(args, "c", None) is not None and getattr(args, "alpha", None) is None:
        config.alpha = None
    return config


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = config_from_args(args)
        files = run(config)
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for path in files:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
