"""Template-bank construction and its on-disk text format.

A bank is the Cartesian product of a mass grid and a detector set, with every
chirp projected to detector strain, right-padded with zeros to a common
length (signal starts are preserved), and annotated with per-template
(offset, range) scale records used for [0, 1] scaling at training time.

The default grid (m1 in [32, 41], m2 in [25, 33], step 0.5 solar masses,
three detectors) yields 19 * 17 * 3 = 969 templates. Published GW150914
template-bank studies that combine three phenomenological waveform families
report different totals (e.g. 2261 signals); with the single analytic family
used here the count derives purely from the grid and detector multiplicity,
so 969 is the documented, deterministic size of the default bank.

Bank directory layout: one UTF-8 text file per template plus ``manifest.txt``.
Template files carry ``# key = value`` header lines for m1, m2, spin1, spin2,
detector, sample_rate_hz, raw_length, padded_length, followed by one sample
per line in scientific notation with 17 significant digits. The manifest
holds ``count``, ``length``, ``sample_rate_hz`` and the template filenames in
bank order.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .detector import DETECTOR_ORDER, DetectorConfig, StrainSeries, project
from .errors import ConfigError, DataError, UnviableTemplateError
from .waveform import BinaryParams, generate_chirp

# Grid endpoints are inclusive up to this absolute slack, so accumulated
# floating steps never drop the final value.
GRID_ENDPOINT_SLACK = 1e-9

TEMPLATE_HEADER_KEYS = (
    "m1",
    "m2",
    "spin1",
    "spin2",
    "detector",
    "sample_rate_hz",
    "raw_length",
    "padded_length",
)


@dataclass(frozen=True)
class GridSpec:
    """Parameter grid for bank generation. Masses in solar masses."""

    m1_min: float = 32.0
    m1_max: float = 41.0
    m2_min: float = 25.0
    m2_max: float = 33.0
    step: float = 0.5
    spin1: float = 0.7
    spin2: float = 0.9
    detectors: tuple[str, ...] = DETECTOR_ORDER
    sample_rate: float = 4096.0
    f_min: float = 20.0
    distance: float = 410.0
    inclination: float = 0.0

    def __post_init__(self) -> None:
        if self.m1_min > self.m1_max or self.m2_min > self.m2_max:
            raise ConfigError("mass ranges must satisfy min <= max")
        if self.step <= 0:
            raise ConfigError(f"step must be positive, got {self.step}")
        if not self.detectors:
            raise ConfigError("at least one detector is required")
        for name in self.detectors:
            if name not in DETECTOR_ORDER:
                raise ConfigError(f"unknown detector {name!r}, expected subset of {DETECTOR_ORDER}")
        if self.sample_rate <= 0 or self.f_min <= 0:
            raise ConfigError("sample_rate and f_min must be positive")


@dataclass(frozen=True, eq=False)
class BankTemplate:
    """One padded bank entry: strain series plus source metadata and scale record."""

    series: StrainSeries
    m1: float
    m2: float
    spin1: float
    spin2: float
    detector: str
    raw_length: int
    offset: float
    value_range: float

    @property
    def scale_record(self) -> tuple[float, float]:
        return (self.offset, self.value_range)


@dataclass(eq=False)
class TemplateBank:
    """Uniform-length labeled training set."""

    length: int
    sample_rate: float
    templates: list[BankTemplate]

    @property
    def scale_records(self) -> list[tuple[float, float]]:
        return [t.scale_record for t in self.templates]

    def matrix(self) -> np.ndarray:
        """Templates stacked into an (n_templates, length) array."""
        return np.stack([t.series.values for t in self.templates])

    def __len__(self) -> int:
        return len(self.templates)


def grid_axis(lo: float, hi: float, step: float) -> list[float]:
    """Values lo, lo+step, ... while <= hi (+ tiny slack), computed as lo + k*step."""
    values = []
    k = 0
    while True:
        v = lo + k * step
        if v > hi + GRID_ENDPOINT_SLACK:
            break
        values.append(v)
        k += 1
    return values


def build_grid(
    spec: GridSpec,
    angles: dict[str, DetectorConfig] | None = None,
) -> list[tuple[BinaryParams, DetectorConfig]]:
    """
    Cartesian product of the mass axes and the detector set.

    Order is deterministic: m1 ascending, then m2 ascending, then detectors in
    H1 < L1 < V1 order. Mass pairs with m2 > m1 are not pruned; BinaryParams
    canonicalizes them by swapping masses and spins together.
    """
    m1_values = grid_axis(spec.m1_min, spec.m1_max, spec.step)
    m2_values = grid_axis(spec.m2_min, spec.m2_max, spec.step)
    detectors = [d for d in DETECTOR_ORDER if d in spec.detectors]
    if not m1_values or not m2_values or not detectors:
        raise ConfigError("grid is empty")

    configs = {}
    for name in detectors:
        cfg = (angles or {}).get(name)
        configs[name] = cfg if cfg is not None else DetectorConfig.default(name)

    entries = []
    for m1 in m1_values:
        for m2 in m2_values:
            params = BinaryParams(
                m1=m1,
                m2=m2,
                spin1=spec.spin1,
                spin2=spec.spin2,
                distance=spec.distance,
                inclination=spec.inclination,
                f_min=spec.f_min,
            )
            for name in detectors:
                entries.append((params, configs[name]))
    return entries


def _render_template(entry: tuple[BinaryParams, DetectorConfig], sample_rate: float) -> StrainSeries:
    params, cfg = entry
    return project(generate_chirp(params, sample_rate), cfg)


def assemble_bank(
    entries: list[tuple[BinaryParams, DetectorConfig]],
    sample_rate: float,
    pad_to: int | None = None,
    threads: int = 1,
) -> TemplateBank:
    """
    Generate, project and zero-pad every grid entry into a bank.

    All templates are right-padded with zeros to the longest raw length
    (or to ``pad_to`` if that is larger), leaving signal starts untouched.
    The result is independent of ``threads``; parallel generation merges
    back in grid order.

    Raises
    ------
    UnviableTemplateError
        For any entry whose parameters cannot produce a template; the message
        names the offending masses.
    ConfigError
        If a projected template is constant (its scale range would be zero).
    """
    if not entries:
        raise ConfigError("cannot assemble a bank from an empty grid")

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            raw = list(pool.map(lambda e: _render_template(e, sample_rate), entries))
    else:
        raw = [_render_template(e, sample_rate) for e in entries]

    length = max(len(s) for s in raw)
    if pad_to is not None:
        length = max(length, int(pad_to))

    templates = []
    for (params, cfg), series in zip(entries, raw):
        padded = np.zeros(length)
        padded[: len(series)] = series.values
        lo = float(padded.min())
        hi = float(padded.max())
        if hi - lo <= 0.0:
            raise ConfigError(
                f"template m1={params.m1}, m2={params.m2}, detector={cfg.name} "
                "is constant; check the detector geometry"
            )
        templates.append(
            BankTemplate(
                series=StrainSeries(sample_rate=float(sample_rate), values=padded, label=cfg.name),
                m1=params.m1,
                m2=params.m2,
                spin1=params.spin1,
                spin2=params.spin2,
                detector=cfg.name,
                raw_length=len(series),
                offset=lo,
                value_range=hi - lo,
            )
        )
    return TemplateBank(length=length, sample_rate=float(sample_rate), templates=templates)


def _fmt(v: float) -> str:
    return f"{v:.17g}"


def _fmt_sample(v: float) -> str:
    return f"{v:.16e}"


def _template_filename(index: int) -> str:
    return f"template_{index:05d}.txt"


def export_bank(bank: TemplateBank, directory: str | Path) -> dict:
    """
    Write one text file per template plus ``manifest.txt``.

    Returns a summary dict with the template count, common length and
    directory. Exports are byte-deterministic for identical banks.
    """
    directory = Path(directory)
    try:
        directory.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise DataError(f"cannot create bank directory {directory}: {exc}") from exc

    filenames = [_template_filename(i) for i in range(len(bank.templates))]
    for name, tpl in zip(filenames, bank.templates):
        path = directory / name
        lines = [
            f"# m1 = {_fmt(tpl.m1)}",
            f"# m2 = {_fmt(tpl.m2)}",
            f"# spin1 = {_fmt(tpl.spin1)}",
            f"# spin2 = {_fmt(tpl.spin2)}",
            f"# detector = {tpl.detector}",
            f"# sample_rate_hz = {_fmt(bank.sample_rate)}",
            f"# raw_length = {tpl.raw_length}",
            f"# padded_length = {bank.length}",
        ]
        lines.extend(_fmt_sample(v) for v in tpl.series.values)
        try:
            path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        except OSError as exc:
            raise DataError(f"cannot write template file {path}: {exc}") from exc

    manifest = [
        f"count = {len(bank.templates)}",
        f"length = {bank.length}",
        f"sample_rate_hz = {_fmt(bank.sample_rate)}",
    ]
    manifest.extend(filenames)
    try:
        (directory / "manifest.txt").write_text("\n".join(manifest) + "\n", encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot write manifest in {directory}: {exc}") from exc
    return {"count": len(bank.templates), "length": bank.length, "directory": str(directory)}


def _parse_header_line(line: str, path: Path, lineno: int) -> tuple[str, str]:
    body = line[1:].strip()
    if "=" not in body:
        raise DataError(f"{path}:{lineno}: malformed header line {line!r}")
    key, _, value = body.partition("=")
    return key.strip(), value.strip()


def import_bank(directory: str | Path) -> TemplateBank:
    """
    Reconstruct a bank from a directory written by :func:`export_bank`.

    Validates the manifest count, per-template lengths, finiteness and scale
    ranges; any inconsistency raises DataError naming the file.
    """
    directory = Path(directory)
    manifest_path = directory / "manifest.txt"
    if not manifest_path.is_file():
        raise DataError(f"missing manifest {manifest_path}")
    lines = manifest_path.read_text(encoding="utf-8").splitlines()
    header: dict[str, str] = {}
    filenames: list[str] = []
    for line in lines:
        line = line.strip()
        if not line:
            continue
        if "=" in line and not filenames:
            key, _, value = line.partition("=")
            header[key.strip()] = value.strip()
        else:
            filenames.append(line)
    try:
        count = int(header["count"])
        length = int(header["length"])
        sample_rate = float(header["sample_rate_hz"])
    except (KeyError, ValueError) as exc:
        raise DataError(f"{manifest_path}: invalid manifest header: {exc}") from exc
    if count != len(filenames):
        raise DataError(
            f"{manifest_path}: manifest count {count} does not match "
            f"{len(filenames)} listed templates"
        )

    templates = []
    for name in filenames:
        path = directory / name
        if not path.is_file():
            raise DataError(f"missing template file {path}")
        meta: dict[str, str] = {}
        values = []
        for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                key, value = _parse_header_line(line, path, lineno)
                meta[key] = value
                continue
            try:
                values.append(float(line))
            except ValueError as exc:
                raise DataError(f"{path}:{lineno}: bad sample value {line!r}") from exc
        try:
            m1 = float(meta["m1"])
            m2 = float(meta["m2"])
            spin1 = float(meta["spin1"])
            spin2 = float(meta["spin2"])
            detector = meta["detector"]
            tpl_rate = float(meta["sample_rate_hz"])
            raw_length = int(meta["raw_length"])
            padded_length = int(meta["padded_length"])
        except (KeyError, ValueError) as exc:
            raise DataError(f"{path}: incomplete or invalid header: {exc}") from exc
        if tpl_rate != sample_rate:
            raise DataError(f"{path}: sample rate {tpl_rate} differs from manifest {sample_rate}")
        if padded_length != length or len(values) != length:
            raise DataError(
                f"{path}: expected {length} samples, header says {padded_length}, "
                f"file has {len(values)}"
            )
        if not 0 < raw_length <= length:
            raise DataError(f"{path}: raw_length {raw_length} out of range")
        arr = np.asarray(values)
        if not np.isfinite(arr).all():
            raise DataError(f"{path}: non-finite sample values")
        lo = float(arr.min())
        hi = float(arr.max())
        if hi - lo <= 0.0:
            raise DataError(f"{path}: constant template (zero scale range)")
        templates.append(
            BankTemplate(
                series=StrainSeries(sample_rate=sample_rate, values=arr, label=detector),
                m1=m1,
                m2=m2,
                spin1=spin1,
                spin2=spin2,
                detector=detector,
                raw_length=raw_length,
                offset=lo,
                value_range=hi - lo,
            )
        )
    return TemplateBank(length=length, sample_rate=sample_rate, templates=templates)
