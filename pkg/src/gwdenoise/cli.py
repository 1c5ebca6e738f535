"""Command-line pipeline: bank, train, denoise, eval.

Each subcommand takes the shared --config/--seed/--threads flags. Exit
codes: 0 success, 2 configuration error, 3 data error, 4 numerical failure.
CSV plot data is always accompanied by a rendered PNG figure.
"""

from __future__ import annotations

import argparse
import math
import sys
import time
from pathlib import Path

from . import autoencoder, bank, report, spectral, strainfile
from .config import PipelineConfig, load_config, override_seed
from .errors import (
    EXIT_CONFIG,
    EXIT_DATA,
    EXIT_NUMERICAL,
    EXIT_OK,
    ConfigError,
    DataError,
    TrainingError,
)


def _format_db(value: float) -> str:
    if math.isinf(value):
        return "+inf dB" if value > 0 else "-inf dB"
    return f"{value:.2f} dB"


def cmd_bank(config: PipelineConfig, threads: int) -> int:
    started = time.perf_counter()
    entries = bank.build_grid(config.grid, angles=config.detector_angles)
    built = bank.assemble_bank(entries, config.grid.sample_rate, threads=threads)
    summary = bank.export_bank(built, config.bank_dir)
    elapsed = time.perf_counter() - started
    print(f"templates = {summary['count']}")
    print(f"length = {summary['length']}")
    print(f"bank_dir = {summary['directory']}")
    print(f"elapsed_s = {elapsed:.2f}")
    return EXIT_OK


def cmd_train(config: PipelineConfig) -> int:
    loaded = bank.import_bank(config.bank_dir)
    model, trace = autoencoder.train(loaded, config.training)
    config.output_dir.mkdir(parents=True, exist_ok=True)
    model_path = config.model_path
    if model_path.parent != Path("."):
        model_path.parent.mkdir(parents=True, exist_ok=True)
    autoencoder.save_model(model, model_path)
    trace_path = config.output_dir / "trace.csv"
    trace.write_csv(trace_path)
    figure_path = config.output_dir / "training_curve.png"
    report.save_training_curve(trace, figure_path)
    final = trace.records[-1] if trace.records else None
    print(f"model = {model_path}")
    print(f"trace = {trace_path}")
    print(f"figure = {figure_path}")
    print(f"epochs = {len(trace.records)}")
    if final is not None:
        print(f"final_total_loss = {final.total:.6g}")
    return EXIT_OK


def cmd_denoise(model_path: Path, strain_path: Path, output_path: Path) -> int:
    model = autoencoder.load_model(model_path)
    strain = strainfile.read_strain(strain_path)
    denoised = autoencoder.denoise(model, strain.to_series())
    out = strainfile.StrainFile(
        detector=strain.detector,
        gps_start=strain.gps_start,
        sample_rate=strain.sample_rate,
        values=denoised.values,
    )
    if output_path.parent != Path("."):
        output_path.parent.mkdir(parents=True, exist_ok=True)
    strainfile.write_strain(out, output_path)
    print(f"output = {output_path}")
    print(f"samples = {len(out.values)}")
    return EXIT_OK


def cmd_eval(
    config: PipelineConfig,
    input_path: Path,
    denoised_path: Path,
    clean_path: Path | None,
) -> int:
    input_strain = strainfile.read_strain(input_path)
    denoised_strain = strainfile.read_strain(denoised_path)
    input_series = input_strain.to_series()
    denoised_series = denoised_strain.to_series()
    if len(input_series.values) != len(denoised_series.values):
        raise DataError(
            f"length mismatch: {input_path} has {len(input_series.values)} samples, "
            f"{denoised_path} has {len(denoised_series.values)}"
        )

    print(f"residual_snr_db = {_format_db(spectral.residual_snr_db(input_series, denoised_series))}")
    if clean_path is not None:
        clean_series = strainfile.read_strain(clean_path).to_series()
        if len(clean_series.values) != len(input_series.values):
            raise DataError(f"clean reference {clean_path} length mismatch")
        oracle = spectral.oracle_snr_db(clean_series, denoised_series)
        gain = spectral.snr_gain_db(clean_series, input_series, denoised_series)
        print(f"oracle_snr_db = {_format_db(oracle)}")
        print(f"snr_gain_db = {_format_db(gain)}")

    # Spectra for Fig-style ASD comparison; shrink the segment for short inputs.
    duration = len(input_series.values) / input_series.sample_rate
    segment_seconds = min(1.0, duration)
    spec_in = spectral.welch_asd(input_series, segment_seconds=segment_seconds)
    spec_out = spectral.welch_asd(denoised_series, segment_seconds=segment_seconds)
    config.output_dir.mkdir(parents=True, exist_ok=True)
    in_csv = config.output_dir / "input_asd.csv"
    out_csv = config.output_dir / "denoised_asd.csv"
    spectral.write_spectrum_csv(spec_in, in_csv)
    spectral.write_spectrum_csv(spec_out, out_csv)
    figure = config.output_dir / "asd_comparison.png"
    report.save_asd_comparison(spec_in, spec_out, figure)
    overlay = config.output_dir / "strain_overlay.png"
    report.save_strain_overlay(input_series, denoised_series, overlay)
    print(f"input_spectrum = {in_csv}")
    print(f"denoised_spectrum = {out_csv}")
    print(f"figures = {figure}, {overlay}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, default=None, help="pipeline config file")
    common.add_argument("--seed", type=int, default=None, help="override the training seed")
    common.add_argument("--threads", type=int, default=1, help="worker threads for bank generation")

    parser = argparse.ArgumentParser(
        prog="gwdenoise",
        description="Chirp template banks, sparse-autoencoder training and strain denoising.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("bank", parents=[common], help="generate and export the template bank")
    sub.add_parser("train", parents=[common], help="train the autoencoder on an exported bank")

    p_denoise = sub.add_parser("denoise", parents=[common], help="run a strain file through a model")
    p_denoise.add_argument("model", type=Path, help="model file")
    p_denoise.add_argument("strain", type=Path, help="input strain file")
    p_denoise.add_argument("output", type=Path, help="output strain file")

    p_eval = sub.add_parser("eval", parents=[common], help="SNR metrics and ASD comparison")
    p_eval.add_argument("input", type=Path, help="input strain file")
    p_eval.add_argument("denoised", type=Path, help="denoised strain file")
    p_eval.add_argument("clean", type=Path, nargs="?", default=None, help="optional clean reference")

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = override_seed(load_config(args.config), args.seed)
        if args.command == "bank":
            return cmd_bank(config, threads=max(1, args.threads))
        if args.command == "train":
            return cmd_train(config)
        if args.command == "denoise":
            return cmd_denoise(args.model, args.strain, args.output)
        if args.command == "eval":
            return cmd_eval(config, args.input, args.denoised, args.clean)
        raise ConfigError(f"unknown command {args.command!r}")
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DataError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except TrainingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
