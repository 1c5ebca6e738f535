"""Single-hidden-layer sparse autoencoder with analytic gradients.

Encoder is always logistic-sigmoid; the decoder is either linear (purelin)
or logistic-sigmoid. The training objective is

    total = mse + l2_weight * l2_term + sparsity_weight * sparsity_term

with mse the mean squared reconstruction error over all batch entries,
l2_term half the sum of squared weights (biases excluded), and
sparsity_term the Kullback-Leibler divergence between the target activation
level and the batch-mean hidden activations. Training is full-batch gradient
descent with classical momentum, deterministic for a given seed.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple

import numpy as np

from .bank import TemplateBank
from .detector import StrainSeries
from .errors import DataError, TrainingError

MODEL_MAGIC = "SAE1"
DECODER_ACTIVATIONS = ("linear", "logsig")

# Batch-mean activations are clamped into [RHO_CLAMP, 1 - RHO_CLAMP] before
# the KL penalty; the induced bias is below 1e-7.
RHO_CLAMP = 1e-8


def logsig(x):
    """Logistic sigmoid 1/(1+exp(-x)), overflow-safe via the sign split."""
    arr = np.asarray(x, dtype=float)
    out = np.empty_like(arr)
    pos = arr >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-arr[pos]))
    ex = np.exp(arr[~pos])
    out[~pos] = ex / (1.0 + ex)
    if np.ndim(x) == 0:
        return float(out)
    return out


def purelin(x):
    """Identity activation."""
    return x


@dataclass(eq=False)
class AutoencoderModel:
    """
    Encoder/decoder parameters.

    w_enc is (hidden_dim, input_dim), w_dec is (input_dim, hidden_dim); the
    encoder activation is always logsig, the decoder one of
    ``DECODER_ACTIVATIONS``. Inputs are expected in the scaled [0, 1] domain.
    """

    w_enc: np.ndarray
    b_enc: np.ndarray
    w_dec: np.ndarray
    b_dec: np.ndarray
    decoder_activation: str = "linear"

    def __post_init__(self) -> None:
        self.w_enc = np.asarray(self.w_enc, dtype=float)
        self.b_enc = np.asarray(self.b_enc, dtype=float)
        self.w_dec = np.asarray(self.w_dec, dtype=float)
        self.b_dec = np.asarray(self.b_dec, dtype=float)
        if self.decoder_activation not in DECODER_ACTIVATIONS:
            raise ValueError(
                f"decoder_activation must be one of {DECODER_ACTIVATIONS}, "
                f"got {self.decoder_activation!r}"
            )
        h, d = self.w_enc.shape
        if self.b_enc.shape != (h,) or self.w_dec.shape != (d, h) or self.b_dec.shape != (d,):
            raise ValueError(
                f"inconsistent parameter shapes: w_enc {self.w_enc.shape}, "
                f"b_enc {self.b_enc.shape}, w_dec {self.w_dec.shape}, b_dec {self.b_dec.shape}"
            )
        for name in ("w_enc", "b_enc", "w_dec", "b_dec"):
            if not np.isfinite(getattr(self, name)).all():
                raise ValueError(f"{name} contains non-finite values")

    @property
    def input_dim(self) -> int:
        return self.w_enc.shape[1]

    @property
    def hidden_dim(self) -> int:
        return self.w_enc.shape[0]

    def copy(self) -> "AutoencoderModel":
        return AutoencoderModel(
            w_enc=self.w_enc.copy(),
            b_enc=self.b_enc.copy(),
            w_dec=self.w_dec.copy(),
            b_dec=self.b_dec.copy(),
            decoder_activation=self.decoder_activation,
        )


@dataclass(frozen=True)
class TrainingConfig:
    """Hyperparameters for full-batch training."""

    hidden_dim: int = 4096
    max_epochs: int = 100
    l2_weight: float = 0.001
    sparsity_weight: float = 4.0
    sparsity_target: float = 0.05
    learning_rate: float = 0.05
    momentum: float = 0.5
    seed: int = 0
    decoder_activation: str = "linear"

    def __post_init__(self) -> None:
        if self.hidden_dim < 1:
            raise ValueError(f"hidden_dim must be >= 1, got {self.hidden_dim}")
        if self.max_epochs < 0:
            raise ValueError(f"max_epochs must be >= 0, got {self.max_epochs}")
        if self.l2_weight < 0 or self.sparsity_weight < 0:
            raise ValueError("l2_weight and sparsity_weight must be non-negative")
        if not 0.0 < self.sparsity_target < 1.0:
            raise ValueError(f"sparsity_target must lie in (0, 1), got {self.sparsity_target}")
        if self.learning_rate <= 0:
            raise ValueError(f"learning_rate must be positive, got {self.learning_rate}")
        if not 0.0 <= self.momentum < 1.0:
            raise ValueError(f"momentum must lie in [0, 1), got {self.momentum}")
        if self.decoder_activation not in DECODER_ACTIVATIONS:
            raise ValueError(
                f"decoder_activation must be one of {DECODER_ACTIVATIONS}, "
                f"got {self.decoder_activation!r}"
            )


class LossBreakdown(NamedTuple):
    total: float
    mse: float
    l2_term: float
    sparsity_term: float


class Gradients(NamedTuple):
    w_enc: np.ndarray
    b_enc: np.ndarray
    w_dec: np.ndarray
    b_dec: np.ndarray


class EpochRecord(NamedTuple):
    epoch: int
    total: float
    mse: float
    l2_term: float
    sparsity_term: float


@dataclass
class TrainingTrace:
    """Per-epoch loss records, epoch indices contiguous from 1."""

    records: list[EpochRecord]

    def __len__(self) -> int:
        return len(self.records)

    def write_csv(self, path: str | Path) -> None:
        lines = ["epoch,total,mse,l2,sparsity"]
        for r in self.records:
            lines.append(
                f"{r.epoch},{r.total:.17g},{r.mse:.17g},{r.l2_term:.17g},{r.sparsity_term:.17g}"
            )
        Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def forward(model: AutoencoderModel, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """
    Hidden activations and reconstruction for one vector or a batch.

    A 1-D input of length input_dim returns 1-D (h_act, x_hat); a 2-D batch
    of shape (n, input_dim) returns 2-D arrays with one row per sample.
    """
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    batch = np.atleast_2d(x)
    if batch.ndim != 2 or batch.shape[1] != model.input_dim:
        raise ValueError(f"expected input of width {model.input_dim}, got shape {x.shape}")
    h = logsig(batch @ model.w_enc.T + model.b_enc)
    pre = h @ model.w_dec.T + model.b_dec
    x_hat = pre if model.decoder_activation == "linear" else logsig(pre)
    if single:
        return h[0], x_hat[0]
    return h, x_hat


def mean_activation(model: AutoencoderModel, batch: np.ndarray) -> np.ndarray:
    """Batch-mean hidden activation per unit; requires at least one sample."""
    batch = np.atleast_2d(np.asarray(batch, dtype=float))
    if batch.shape[0] < 1 or batch.size == 0:
        raise ValueError("batch must contain at least one sample")
    h, _ = forward(model, batch)
    return h.mean(axis=0)


def l2_penalty(model: AutoencoderModel) -> float:
    """Half the sum of squared encoder and decoder weights; biases excluded."""
    return 0.5 * (float(np.sum(model.w_enc**2)) + float(np.sum(model.w_dec**2)))


def kl_sparsity(rho: float, rho_hat: np.ndarray) -> float:
    """
    Summed Bernoulli KL divergence between the target level and each unit's
    mean activation. rho_hat components are clamped into
    [RHO_CLAMP, 1 - RHO_CLAMP] first; the result is always >= 0.
    """
    if not 0.0 < rho < 1.0:
        raise ValueError(f"sparsity target must lie in (0, 1), got {rho}")
    r = np.clip(np.asarray(rho_hat, dtype=float), RHO_CLAMP, 1.0 - RHO_CLAMP)
    return float(np.sum(rho * np.log(rho / r) + (1.0 - rho) * np.log((1.0 - rho) / (1.0 - r))))


def _loss_and_gradients(
    model: AutoencoderModel,
    batch: np.ndarray,
    cfg: TrainingConfig,
    want_gradients: bool = True,
) -> tuple[LossBreakdown, Gradients | None]:
    x = np.atleast_2d(np.asarray(batch, dtype=float))
    if x.shape[0] < 1 or x.size == 0:
        raise ValueError("batch must contain at least one sample")
    n, d = x.shape
    h, x_hat = forward(model, x)

    err = x_hat - x
    mse = float(np.sum(err**2)) / (n * d)
    l2 = l2_penalty(model)
    rho = cfg.sparsity_target
    rho_hat = h.mean(axis=0)
    kl = kl_sparsity(rho, rho_hat)
    total = mse + cfg.l2_weight * l2 + cfg.sparsity_weight * kl
    breakdown = LossBreakdown(total=total, mse=mse, l2_term=l2, sparsity_term=kl)
    if not want_gradients:
        return breakdown, None

    d_xhat = (2.0 / (n * d)) * err
    if model.decoder_activation == "logsig":
        d_pre2 = d_xhat * x_hat * (1.0 - x_hat)
    else:
        d_pre2 = d_xhat
    g_w_dec = d_pre2.T @ h + cfg.l2_weight * model.w_dec
    g_b_dec = d_pre2.sum(axis=0)

    d_h = d_pre2 @ model.w_dec
    # KL reaches every sample through the batch mean; the clamp is flat, so
    # clamped units contribute no gradient.
    inside = (rho_hat >= RHO_CLAMP) & (rho_hat <= 1.0 - RHO_CLAMP)
    r = np.clip(rho_hat, RHO_CLAMP, 1.0 - RHO_CLAMP)
    d_kl = np.where(inside, -rho / r + (1.0 - rho) / (1.0 - r), 0.0)
    d_h = d_h + (cfg.sparsity_weight / n) * d_kl

    d_pre1 = d_h * h * (1.0 - h)
    g_w_enc = d_pre1.T @ x + cfg.l2_weight * model.w_enc
    g_b_enc = d_pre1.sum(axis=0)
    return breakdown, Gradients(w_enc=g_w_enc, b_enc=g_b_enc, w_dec=g_w_dec, b_dec=g_b_dec)


def loss(model: AutoencoderModel, batch: np.ndarray, cfg: TrainingConfig) -> LossBreakdown:
    """Total training loss and its three unweighted components."""
    breakdown, _ = _loss_and_gradients(model, batch, cfg, want_gradients=False)
    return breakdown


def gradients(model: AutoencoderModel, batch: np.ndarray, cfg: TrainingConfig) -> Gradients:
    """Analytic gradients of the total loss for every parameter array."""
    _, grads = _loss_and_gradients(model, batch, cfg)
    assert grads is not None
    return grads


def initialize_model(input_dim: int, cfg: TrainingConfig) -> AutoencoderModel:
    """Seeded Glorot-uniform weights, zero biases; w_enc is drawn first."""
    rng = np.random.default_rng(cfg.seed)
    limit = math.sqrt(6.0 / (input_dim + cfg.hidden_dim))
    w_enc = rng.uniform(-limit, limit, size=(cfg.hidden_dim, input_dim))
    w_dec = rng.uniform(-limit, limit, size=(input_dim, cfg.hidden_dim))
    return AutoencoderModel(
        w_enc=w_enc,
        b_enc=np.zeros(cfg.hidden_dim),
        w_dec=w_dec,
        b_dec=np.zeros(input_dim),
        decoder_activation=cfg.decoder_activation,
    )


def scale_to_unit(values: np.ndarray, offset: float, value_range: float) -> np.ndarray:
    if value_range <= 0:
        raise ValueError("scale range must be positive")
    return (values - offset) / value_range


def training_matrix(bank: TemplateBank) -> np.ndarray:
    """Bank templates scaled to [0, 1] via their stored scale records."""
    return np.stack(
        [scale_to_unit(t.series.values, t.offset, t.value_range) for t in bank.templates]
    )


def train(bank: TemplateBank, cfg: TrainingConfig) -> tuple[AutoencoderModel, TrainingTrace]:
    """
    Full-batch gradient descent with classical momentum over the bank.

    Each epoch evaluates the loss and gradients at the current parameters,
    records the loss, then applies v = momentum*v - lr*g; p += v. The run is
    fully deterministic for a given (bank, cfg). A non-finite loss aborts
    with TrainingError naming the epoch.
    """
    if not bank.templates:
        raise ValueError("cannot train on an empty bank")
    if cfg.hidden_dim > bank.length:
        warnings.warn(
            f"hidden_dim={cfg.hidden_dim} exceeds the input length {bank.length}; "
            "an overcomplete code can simply copy its input",
            stacklevel=2,
        )
    x = training_matrix(bank)
    model = initialize_model(bank.length, cfg)
    velocity = Gradients(
        w_enc=np.zeros_like(model.w_enc),
        b_enc=np.zeros_like(model.b_enc),
        w_dec=np.zeros_like(model.w_dec),
        b_dec=np.zeros_like(model.b_dec),
    )
    records = []
    for epoch in range(1, cfg.max_epochs + 1):
        breakdown, grads = _loss_and_gradients(model, x, cfg)
        assert grads is not None
        if not math.isfinite(breakdown.total):
            raise TrainingError(f"training diverged at epoch {epoch}: loss={breakdown.total}")
        records.append(EpochRecord(epoch, *breakdown))
        for name in ("w_enc", "b_enc", "w_dec", "b_dec"):
            v = getattr(velocity, name)
            v *= cfg.momentum
            v -= cfg.learning_rate * getattr(grads, name)
            param = getattr(model, name)
            param += v
    return model, TrainingTrace(records=records)


def denoise(model: AutoencoderModel, series: StrainSeries) -> StrainSeries:
    """
    Reconstruct a strain series through the autoencoder.

    Inputs longer than input_dim are processed in non-overlapping windows;
    the last window is right-padded with zeros and its output truncated.
    Each window is scaled to [0, 1] by its own min/max before the forward
    pass and inverse-transformed afterwards, so the output keeps the input's
    physical scale and exact length.

    Raises
    ------
    ValueError
        If any window is constant (zero scale range).
    """
    values = np.asarray(series.values, dtype=float)
    if values.size == 0:
        raise ValueError("cannot denoise an empty series")
    d = model.input_dim
    out = np.empty_like(values)
    for start in range(0, len(values), d):
        chunk = values[start : start + d]
        window = chunk
        if len(chunk) < d:
            window = np.zeros(d)
            window[: len(chunk)] = chunk
        lo = float(window.min())
        hi = float(window.max())
        if hi - lo <= 0.0:
            raise ValueError(
                f"constant input in window starting at sample {start}; cannot scale"
            )
        _, x_hat = forward(model, (window - lo) / (hi - lo))
        out[start : start + len(chunk)] = (x_hat * (hi - lo) + lo)[: len(chunk)]
    return StrainSeries(sample_rate=series.sample_rate, values=out, label=series.label)


def save_model(model: AutoencoderModel, path: str | Path) -> None:
    """Write the model as UTF-8 text (magic line, dims, then weight sections)."""
    lines = [
        MODEL_MAGIC,
        f"input_dim = {model.input_dim}",
        f"hidden_dim = {model.hidden_dim}",
        f"decoder = {model.decoder_activation}",
    ]
    for name, arr in (
        ("W_enc", model.w_enc),
        ("b_enc", model.b_enc.reshape(1, -1)),
        ("W_dec", model.w_dec),
        ("b_dec", model.b_dec.reshape(1, -1)),
    ):
        lines.append(name)
        for row in arr:
            lines.append(" ".join(f"{v:.17g}" for v in row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_model(path: str | Path) -> AutoencoderModel:
    """Read a model written by :func:`save_model`, validating the format."""
    path = Path(path)
    if not path.is_file():
        raise DataError(f"missing model file {path}")
    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines or lines[0].strip() != MODEL_MAGIC:
        raise DataError(f"{path}: not a {MODEL_MAGIC} model file")

    def _header(idx: int, key: str) -> str:
        if idx >= len(lines):
            raise DataError(f"{path}: truncated header")
        k, _, v = lines[idx].partition("=")
        if k.strip() != key:
            raise DataError(f"{path}: expected {key!r} on line {idx + 1}")
        return v.strip()

    try:
        input_dim = int(_header(1, "input_dim"))
        hidden_dim = int(_header(2, "hidden_dim"))
    except ValueError as exc:
        raise DataError(f"{path}: bad dimension header: {exc}") from exc
    decoder = _header(3, "decoder")
    if decoder not in DECODER_ACTIVATIONS:
        raise DataError(f"{path}: unknown decoder activation {decoder!r}")
    if input_dim < 1 or hidden_dim < 1:
        raise DataError(f"{path}: dimensions must be positive")

    sections = (
        ("W_enc", (hidden_dim, input_dim)),
        ("b_enc", (1, hidden_dim)),
        ("W_dec", (input_dim, hidden_dim)),
        ("b_dec", (1, input_dim)),
    )
    idx = 4
    arrays = {}
    for name, (rows, cols) in sections:
        if idx >= len(lines) or lines[idx].strip() != name:
            raise DataError(f"{path}: expected section {name!r} on line {idx + 1}")
        idx += 1
        if idx + rows > len(lines):
            raise DataError(f"{path}: truncated section {name!r}")
        block = []
        for r in range(rows):
            parts = lines[idx + r].split()
            if len(parts) != cols:
                raise DataError(
                    f"{path}:{idx + r + 1}: section {name!r} row has {len(parts)} "
                    f"values, expected {cols}"
                )
            try:
                block.append([float(p) for p in parts])
            except ValueError as exc:
                raise DataError(f"{path}:{idx + r + 1}: bad value in {name!r}: {exc}") from exc
        arrays[name] = np.asarray(block)
        idx += rows
    if any(line.strip() for line in lines[idx:]):
        raise DataError(f"{path}: trailing content after b_dec section")

    try:
        return AutoencoderModel(
            w_enc=arrays["W_enc"],
            b_enc=arrays["b_enc"][0],
            w_dec=arrays["W_dec"],
            b_dec=arrays["b_dec"][0],
            decoder_activation=decoder,
        )
    except ValueError as exc:
        raise DataError(f"{path}: {exc}") from exc
