"""Figure rendering for the CLI report paths.

Every figure is written to a file next to its CSV counterpart; nothing is
shown interactively (Agg backend).
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .autoencoder import TrainingTrace
from .detector import StrainSeries
from .spectral import Spectrum


def save_training_curve(trace: TrainingTrace, path: str | Path) -> None:
    """Loss components per epoch on a log scale."""
    epochs = [r.epoch for r in trace.records]
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.semilogy(epochs, [r.total for r in trace.records], label="total", color="C0")
    ax.semilogy(epochs, [r.mse for r in trace.records], label="mse", color="C1", ls="--")
    ax.semilogy(
        epochs, [r.sparsity_term for r in trace.records], label="sparsity", color="C2", ls=":"
    )
    ax.semilogy(epochs, [r.l2_term for r in trace.records], label="l2", color="C3", ls="-.")
    ax.set_xlabel("epoch")
    ax.set_ylabel("loss")
    ax.set_title("Training curve")
    ax.legend()
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_asd_comparison(
    input_spectrum: Spectrum,
    output_spectrum: Spectrum,
    path: str | Path,
) -> None:
    """Input vs denoised amplitude spectral density on log-log axes."""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    mask_in = (input_spectrum.freqs > 0) & (input_spectrum.asd > 0)
    mask_out = (output_spectrum.freqs > 0) & (output_spectrum.asd > 0)
    ax.loglog(
        input_spectrum.freqs[mask_in], input_spectrum.asd[mask_in], label="input", color="C1"
    )
    ax.loglog(
        output_spectrum.freqs[mask_out],
        output_spectrum.asd[mask_out],
        label="denoised",
        color="C0",
    )
    ax.set_xlabel("frequency [Hz]")
    ax.set_ylabel("ASD [1/$\\sqrt{\\mathrm{Hz}}$]")
    ax.set_title("Amplitude spectral density")
    ax.legend()
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_strain_overlay(
    input_series: StrainSeries,
    output_series: StrainSeries,
    path: str | Path,
) -> None:
    """Time-domain overlay of the input strain and the denoised output."""
    t_in = np.arange(len(input_series.values)) / input_series.sample_rate
    t_out = np.arange(len(output_series.values)) / output_series.sample_rate
    fig, ax = plt.subplots(figsize=(8, 4))
    ax.plot(t_in, input_series.values, label="input", color="C1", lw=0.7, alpha=0.8)
    ax.plot(t_out, output_series.values, label="denoised", color="C0", lw=0.9)
    ax.set_xlabel("time [s]")
    ax.set_ylabel("strain")
    ax.set_title("Denoised strain")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
