"""Chirp template banks, sparse-autoencoder training and strain denoising."""

from .autoencoder import (
    AutoencoderModel,
    TrainingConfig,
    TrainingTrace,
    denoise,
    forward,
    gradients,
    kl_sparsity,
    l2_penalty,
    load_model,
    logsig,
    loss,
    mean_activation,
    purelin,
    save_model,
    train,
)
from .bank import (
    GridSpec,
    TemplateBank,
    assemble_bank,
    build_grid,
    export_bank,
    import_bank,
)
from .detector import DetectorConfig, StrainSeries, antenna_pattern, project
from .errors import ConfigError, DataError, TrainingError, UnviableTemplateError
from .spectral import (
    Spectrum,
    oracle_snr_db,
    residual_snr_db,
    snr_gain_db,
    welch_asd,
)
from .strainfile import StrainFile, read_strain, write_strain
from .waveform import (
    BinaryParams,
    PolarizedWaveform,
    chirp_mass,
    dimensionless_spin,
    generate_chirp,
    gw_frequency_at,
    isco_frequency,
    symmetric_mass_ratio,
    time_to_coalescence,
)

__version__ = "0.1.0"

__all__ = [
    "AutoencoderModel",
    "BinaryParams",
    "ConfigError",
    "DataError",
    "DetectorConfig",
    "GridSpec",
    "PolarizedWaveform",
    "Spectrum",
    "StrainFile",
    "StrainSeries",
    "TemplateBank",
    "TrainingConfig",
    "TrainingError",
    "TrainingTrace",
    "UnviableTemplateError",
    "antenna_pattern",
    "assemble_bank",
    "build_grid",
    "chirp_mass",
    "denoise",
    "dimensionless_spin",
    "export_bank",
    "forward",
    "generate_chirp",
    "gradients",
    "gw_frequency_at",
    "import_bank",
    "isco_frequency",
    "kl_sparsity",
    "l2_penalty",
    "load_model",
    "logsig",
    "loss",
    "mean_activation",
    "oracle_snr_db",
    "project",
    "purelin",
    "read_strain",
    "residual_snr_db",
    "save_model",
    "snr_gain_db",
    "symmetric_mass_ratio",
    "time_to_coalescence",
    "train",
    "welch_asd",
    "write_strain",
]
