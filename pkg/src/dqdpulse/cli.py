"""Command-line entry point.

Subcommands: ``optimize`` (full batch per config), ``spectrum`` (power
spectrum of a pulse CSV), ``propagate`` (trajectory of a logical state
under a pulse CSV), ``qpa`` (parity algorithm from three pulse files),
``sweep-spectrum`` (energy levels vs detuning).  Exit codes: 0 success,
1 infidelity target missed or parity readout wrong, 2 config/format
error, 3 optimizer divergence.
"""

import argparse
import dataclasses
import os
import sys

from .analysis import power_spectrum
from .config import load_config
from .errors import ConfigError, DivergenceError, DqdPulseError, PulseFormatError
from .hybrid_model import build_model_basis, energy_spectrum_sweep
from .io import (
    import_pulse,
    write_spectrum,
    write_spectrum_sweep,
    write_trajectory,
)
from .propagation import propagate_forward
from .qpa import parity, run_qpa
from .runner import run_experiment

EXIT_OK = 0
EXIT_TARGET_MISSED = 1
EXIT_CONFIG_ERROR = 2
EXIT_DIVERGENCE = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dqdpulse",
        description="Pulse synthesis and parity-algorithm toolkit for a "
                    "4-level double-dot hybrid qubit.")
    parser.add_argument("--config", metavar="PATH",
                        help="run configuration file (defaults used if omitted)")
    parser.add_argument("--out", metavar="DIR",
                        help="output directory (overrides config output_dir)")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("optimize", help="optimize the configured gate list and, "
                                    "with all 8 gates, run the parity algorithm")

    p_spec = sub.add_parser("spectrum", help="power spectrum of a pulse CSV")
    p_spec.add_argument("pulse", help="pulse CSV (t_ns,E_ueV)")

    p_prop = sub.add_parser("propagate", help="propagate a logical state under a pulse")
    p_prop.add_argument("pulse", help="pulse CSV (t_ns,E_ueV)")
    p_prop.add_argument("--initial", type=int, default=2, choices=(1, 2, 3, 4),
                        metavar="LABEL", help="initial logical level (default 2)")

    p_qpa = sub.add_parser("qpa", help="run the parity algorithm from pulse files")
    p_qpa.add_argument("--pulses", required=True, metavar="DIR",
                       help="directory with pulse_UFT.csv, pulse_P<k>.csv, "
                            "pulse_UFTdag.csv")
    p_qpa.add_argument("--k", required=True, type=int, choices=range(1, 7),
                       metavar="1..6", help="permutation index")

    sub.add_parser("sweep-spectrum", help="energy levels vs detuning as CSV")
    return parser


def _out_dir(args, config) -> str:
    out = args.out or config.output_dir
    os.makedirs(out, exist_ok=True)
    return out


def _cmd_optimize(args, config) -> int:
    manifest = run_experiment(config)
    if any(g.diverged for g in manifest.gates):
        return EXIT_DIVERGENCE
    if not manifest.all_reached_goal:
        return EXIT_TARGET_MISSED
    if manifest.qpa and not all(row["match"] for row in manifest.qpa):
        return EXIT_TARGET_MISSED
    return EXIT_OK


def _cmd_spectrum(args, config) -> int:
    field = import_pulse(args.pulse)
    table = power_spectrum(field, window=config.spectrum_window)
    stem = os.path.splitext(os.path.basename(args.pulse))[0]
    write_spectrum(table, os.path.join(_out_dir(args, config), f"spectrum_{stem}.csv"))
    return EXIT_OK


def _cmd_propagate(args, config) -> int:
    field = import_pulse(args.pulse)
    model = build_model_basis(config.params, field_sign=config.field_sign)
    traj = propagate_forward(model, model.logical_state(args.initial), field)
    stem = os.path.splitext(os.path.basename(args.pulse))[0]
    write_trajectory(traj, model,
                     os.path.join(_out_dir(args, config),
                                  f"trajectory_{stem}_from{args.initial}.csv"))
    return EXIT_OK


def _cmd_qpa(args, config) -> int:
    model = build_model_basis(config.params, field_sign=config.field_sign)
    pulses = {}
    for name in ("UFT", f"P{args.k}", "UFTdag"):
        path = os.path.join(args.pulses, f"pulse_{name}.csv")
        if not os.path.exists(path):
            raise PulseFormatError(f"missing pulse file: {path}")
        pulses[name] = import_pulse(path)
    outcome = run_qpa(model, pulses["UFT"], pulses[f"P{args.k}"],
                      pulses["UFTdag"], args.k)
    probs = ",".join(f"P{j + 1}={p:.6e}" for j, p in enumerate(outcome.probabilities))
    print(f"k={args.k} {probs} parity={outcome.inferred_parity.value} "
          f"confidence={outcome.confidence:.6f}")
    return EXIT_OK if outcome.inferred_parity == parity(args.k) else EXIT_TARGET_MISSED


def _cmd_sweep_spectrum(args, config) -> int:
    table = energy_spectrum_sweep(config.params, config.sweep_eps_min,
                                  config.sweep_eps_max, config.sweep_points)
    write_spectrum_sweep(table, os.path.join(_out_dir(args, config),
                                             "energy_spectrum.csv"))
    return EXIT_OK


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = load_config(args.config)
        if args.out:
            config = dataclasses.replace(config, output_dir=args.out)
        handler = {
            "optimize": _cmd_optimize,
            "spectrum": _cmd_spectrum,
            "propagate": _cmd_propagate,
            "qpa": _cmd_qpa,
            "sweep-spectrum": _cmd_sweep_spectrum,
        }[args.command]
        return handler(args, config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    except PulseFormatError as exc:
        print(f"pulse format error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    except DivergenceError as exc:
        print(f"divergence: {exc}", file=sys.stderr)
        return EXIT_DIVERGENCE
    except DqdPulseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR


if __name__ == "__main__":
    sys.exit(main())
