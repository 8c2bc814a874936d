#
# Copyright 2025 The Apache Software Foundation
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
#

"""The ``ssm-lab`` command: run experiments and write CSV results."""

import argparse
import sys
import time
from pathlib import Path
from typing import Any

import structlog

# MUST import logging_config FIRST to configure stderr output
import ssm_lab.logging_config  # noqa: F401
from ssm_lab.allocation.dataset import write_dataset
from ssm_lab.allocation.network import save_model
from ssm_lab.config import experiment_presets, settings
from ssm_lab.exceptions import SsmLabError
from ssm_lab.harness.experiments import ExperimentKind, load_config, run_experiment
from ssm_lab.harness.output import STDOUT, ResultTable, write_metadata, write_results
from ssm_lab.link.constellation import ConstellationKind, build, point_to_bits
from ssm_lab.logging_config import configure_logging
from ssm_lab.selection.tas import EdasMode, TasStrategy

logger = structlog.get_logger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_GATE_FAILED = 2

# flag destination -> ExperimentConfig field
OVERRIDES = {
    "seed": "seed",
    "workers": "workers",
    "snr": "snr_db",
    "trials": "trials",
    "channels": "channels",
    "noise_samples": "noise_samples",
    "beta": "beta",
    "modulation": "modulation",
    "order": "order",
    "power": "power",
    "na": "n_a",
    "nt": "n_t",
    "nb": "n_b",
    "ne": "n_e",
    "nr": "n_r",
    "tas_strategy": "tas_strategy",
    "edas_mode": "edas_mode",
    "samples": "samples",
    "epochs": "epochs",
    "model": "network_file",
    "dataset": "dataset_file",
}

def _add_experiment_arguments(parser: argparse.ArgumentParser) -> None:
    source = parser.add_mutually_exclusive_group()
    source.add_argument("--preset", help="Named preset from the experiments file")
    source.add_argument("--config", type=Path, help="TOML file of config fields")

    parser.add_argument(
        "--output", "-o",
        help=(
            "Output path, or '-' for stdout (default: <output_dir>/<command>.csv;"
            " dnn-dataset writes <output_dir>/<preset>.jsonl)"
        ),
    )
    parser.add_argument("--seed", type=int, help="Master seed")
    parser.add_argument("--workers", type=int, help="Worker processes")
    parser.add_argument("--snr", type=float, nargs="+", help="SNR grid in dB")
    parser.add_argument("--trials", type=int, help="BER trials per SNR point")
    parser.add_argument("--channels", type=int, help="Channel draws per SNR point")
    parser.add_argument("--noise-samples", type=int, help="Noise draws K per MI estimate")
    parser.add_argument("--beta", type=float, help="Power-allocation factor")
    parser.add_argument(
        "--modulation", choices=[k.value for k in ConstellationKind], help="Constellation family"
    )
    parser.add_argument("--order", type=int, help="Constellation size M")
    parser.add_argument("--power", type=float, help="Transmit power P in watts")
    for flag, what in (
        ("--na", "Transmit antennas at Alice"),
        ("--nt", "Active transmit antennas"),
        ("--nb", "Receive antennas at Bob"),
        ("--ne", "Receive antennas at Eve"),
        ("--nr", "Receive antennas for BER sweeps"),
    ):
        parser.add_argument(flag, type=int, help=what)
    parser.add_argument(
        "--tas-strategy", choices=[s.value for s in TasStrategy], help="Selection for sr-snr-sweep"
    )
    parser.add_argument(
        "--edas-mode", choices=[m.value for m in EdasMode], help="EDAS objective"
    )
    parser.add_argument("--samples", type=int, help="Samples for dnn-dataset")
    parser.add_argument("--epochs", type=int, help="Training epochs for dnn-train")
    parser.add_argument("--model", type=Path, help="Model file (written by dnn-train)")
    parser.add_argument("--dataset", type=Path, help="Dataset file (JSON lines)")


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subcommand per experiment."""
    parser = argparse.ArgumentParser(
        prog="ssm-lab",
        description="Secure spatial modulation simulation laboratory",
    )
    parser.add_argument("--log-level", help=f"Log level (default: {settings.log_level})")
    parser.add_argument(
        "--log-format", choices=["console", "json"],
        help=f"Log format (default: {settings.log_format})"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    for kind in ExperimentKind:
        sub = commands.add_parser(kind.value, help=f"Run the {kind.value} experiment")
        _add_experiment_arguments(sub)

    constellation = commands.add_parser("constellation", help="Dump a constellation as CSV")
    constellation.add_argument(
        "--modulation", choices=[k.value for k in ConstellationKind], default="qam"
    )
    constellation.add_argument("--order", type=int, default=16)
    constellation.add_argument(
        "--output", "-o", default=STDOUT, help="Output path (default: stdout)"
    )

    commands.add_parser("presets", help="List the experiment presets")
    return parser


def _overrides(args: argparse.Namespace) -> dict[str, Any]:
    return {field: getattr(args, dest) for dest, field in OVERRIDES.items()}


def _default_output(kind: ExperimentKind, preset: str | None = None) -> Path:
    if kind is ExperimentKind.DNN_DATASET:
        # one file per preset: pa-dataset and pa-test-set must not share a path
        return settings.output_dir / f"{preset or 'pa-dataset'}.jsonl"
    return settings.output_dir / f"{kind.value}.csv"


def run_command(args: argparse.Namespace) -> int:
    """
    Run one experiment subcommand.

    Args:
        args: Parsed command-line arguments

    Returns:
        Exit code (0 success, 1 error, 2 gate failure)
    """
    kind = ExperimentKind(args.command)
    cfg = load_config(kind, args.preset, args.config, _overrides(args))
    output = args.output if args.output is not None else _default_output(kind, args.preset)

    started = time.perf_counter()
    result = run_experiment(cfg)
    elapsed = time.perf_counter() - started

    if kind is ExperimentKind.DNN_DATASET:
        if str(output) == STDOUT:
            raise ValueError("dnn-dataset writes a JSON-lines file; give --output PATH")
        path = Path(output)
        write_dataset(result.samples or [], path)
        summary = result.table.rows[0] if result.table.rows else {}
        write_metadata(
            path, cfg.echo(), cfg.seed, elapsed, len(result.samples or []), extra=summary
        )
    else:
        if kind is ExperimentKind.DNN_TRAIN and result.training is not None:
            model_path = cfg.network_file or settings.output_dir / "pa-model.json"
            save_model(result.training.model, model_path)
            result.extra["model_file"] = str(model_path)
        write_results(
            result.table, output, cfg.echo(), cfg.seed, elapsed,
            gates=result.gates, extra=result.extra,
        )

    if not result.passed:
        failed = sorted(name for name, ok in result.gates.items() if not ok)
        logger.error("gates_failed", kind=kind.value, gates=failed)
        print(f"Error: gating assertions failed: {', '.join(failed)}", file=sys.stderr)
        return EXIT_GATE_FAILED
    return EXIT_OK


def dump_constellation(args: argparse.Namespace) -> int:
    """Write index, label, bits and coordinates of every point."""
    c = build(args.modulation, args.order)
    table = ResultTable(("index", "label", "bits", "re", "im"))
    for index in range(c.order):
        table.add(
            index=index,
            label=int(c.labels[index]),
            bits="".join(str(b) for b in point_to_bits(c, index)),
            re=float(c.points[index].real),
            im=float(c.points[index].imag),
        )
    config = {"modulation": c.kind.value, "order": c.order}
    write_results(table, args.output, config, seed=0, wall_time_s=0.0)
    return EXIT_OK


def list_presets() -> int:
    for name in experiment_presets.names():
        print(name)
    return EXIT_OK


def main(argv: list[str] | None = None):
    """Main entry point for the ssm-lab CLI."""
    args = build_parser().parse_args(argv)
    if args.log_level or args.log_format:
        configure_logging(args.log_level, args.log_format)

    try:
        if args.command == "presets":
            exit_code = list_presets()
        elif args.command == "constellation":
            exit_code = dump_constellation(args)
        else:
            exit_code = run_command(args)
    except (SsmLabError, OSError, KeyError, ValueError) as e:
        logger.error("command_failed", command=args.command, error=str(e))
        print(f"Error: {e}", file=sys.stderr)
        exit_code = EXIT_ERROR

    sys.exit(exit_code)


if __name__ == "__main__":
    main()
