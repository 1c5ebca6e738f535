"""Line-oriented pipeline configuration.

Config files are UTF-8 text with ``section.key = value`` lines; lines whose
first non-blank character is ``#`` are comments. Unknown keys are rejected.
Numeric output and input always use the decimal point, never a comma.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from .autoencoder import DECODER_ACTIVATIONS, TrainingConfig
from .bank import GridSpec
from .detector import DEFAULT_DETECTOR_ANGLES, DETECTOR_ORDER, DetectorConfig
from .errors import ConfigError

GRID_KEYS = {
    "m1_min": float,
    "m1_max": float,
    "m2_min": float,
    "m2_max": float,
    "step": float,
    "spin1": float,
    "spin2": float,
    "detectors": str,
    "sample_rate_hz": float,
    "f_min_hz": float,
    "distance_mpc": float,
    "inclination_rad": float,
}

TRAINING_KEYS = {
    "hidden_dim": int,
    "max_epochs": int,
    "l2_weight": float,
    "sparsity_weight": float,
    "sparsity_target": float,
    "learning_rate": float,
    "momentum": float,
    "seed": int,
    "decoder": str,
}

DETECTOR_ANGLE_KEYS = ("theta", "phi", "psi")

PATH_KEYS = ("bank_dir", "model_path", "output_dir")

# Config key -> GridSpec field, where names differ.
_GRID_FIELD = {
    "sample_rate_hz": "sample_rate",
    "f_min_hz": "f_min",
    "distance_mpc": "distance",
    "inclination_rad": "inclination",
}
_TRAINING_FIELD = {"decoder": "decoder_activation"}


@dataclass
class PipelineConfig:
    """Everything a pipeline run needs: grid, training, geometry, paths."""

    grid: GridSpec = field(default_factory=GridSpec)
    training: TrainingConfig = field(default_factory=TrainingConfig)
    detector_angles: dict[str, DetectorConfig] = field(default_factory=dict)
    bank_dir: Path = Path("bank")
    model_path: Path = Path("model.txt")
    output_dir: Path = Path("out")


def _parse_value(raw: str, kind, key: str):
    try:
        if kind is int:
            return int(raw)
        if kind is float:
            return float(raw)
    except ValueError as exc:
        raise ConfigError(f"bad value for {key}: {raw!r} ({exc})") from exc
    return raw


def parse_config_text(text: str, source: str = "<config>") -> PipelineConfig:
    grid_kwargs: dict = {}
    training_kwargs: dict = {}
    angle_overrides: dict[str, dict[str, float]] = {}
    paths: dict[str, Path] = {}

    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        key, sep, value = stripped.partition("=")
        if not sep:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {line!r}")
        key = key.strip()
        value = value.strip()
        parts = key.split(".")

        if len(parts) == 2 and parts[0] == "grid" and parts[1] in GRID_KEYS:
            name = parts[1]
            parsed = _parse_value(value, GRID_KEYS[name], key)
            if name == "detectors":
                parsed = tuple(d.strip() for d in value.split(",") if d.strip())
            grid_kwargs[_GRID_FIELD.get(name, name)] = parsed
        elif len(parts) == 2 and parts[0] == "training" and parts[1] in TRAINING_KEYS:
            name = parts[1]
            parsed = _parse_value(value, TRAINING_KEYS[name], key)
            if name == "decoder" and parsed not in DECODER_ACTIVATIONS:
                raise ConfigError(
                    f"{source}:{lineno}: decoder must be one of {DECODER_ACTIVATIONS}"
                )
            training_kwargs[_TRAINING_FIELD.get(name, name)] = parsed
        elif (
            len(parts) == 3
            and parts[0] == "detectors"
            and parts[1] in DETECTOR_ORDER
            and parts[2] in DETECTOR_ANGLE_KEYS
        ):
            angle_overrides.setdefault(parts[1], {})[parts[2]] = _parse_value(value, float, key)
        elif len(parts) == 2 and parts[0] == "paths" and parts[1] in PATH_KEYS:
            paths[parts[1]] = Path(value)
        else:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")

    try:
        grid = GridSpec(**grid_kwargs)
        training = TrainingConfig(**training_kwargs)
    except (ConfigError, ValueError) as exc:
        raise ConfigError(f"{source}: {exc}") from exc

    detector_angles = {}
    for name, angles in angle_overrides.items():
        theta, phi, psi = DEFAULT_DETECTOR_ANGLES[name]
        detector_angles[name] = DetectorConfig(
            name=name,
            theta=angles.get("theta", theta),
            phi=angles.get("phi", phi),
            psi=angles.get("psi", psi),
        )

    cfg = PipelineConfig(grid=grid, training=training, detector_angles=detector_angles)
    for key, value in paths.items():
        setattr(cfg, key, value)
    return cfg


def load_config(path: str | Path | None) -> PipelineConfig:
    """Parse a config file; with no path, return the defaults."""
    if path is None:
        return PipelineConfig()
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"missing config file {path}")
    return parse_config_text(path.read_text(encoding="utf-8"), source=str(path))


def override_seed(cfg: PipelineConfig, seed: int | None) -> PipelineConfig:
    """Return the config with the training seed replaced (for --seed)."""
    if seed is None:
        return cfg
    cfg.training = replace(cfg.training, seed=seed)
    return cfg
