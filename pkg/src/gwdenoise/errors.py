"""Exception types and process exit codes shared across the pipeline."""

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_NUMERICAL = 4


class ConfigError(Exception):
    """Invalid configuration: unknown keys, bad grids, Nyquist violations."""


class UnviableTemplateError(ConfigError, ValueError):
    """Source parameters cannot produce a template (f_min at or above ISCO)."""


class DataError(Exception):
    """Malformed or inconsistent on-disk data (banks, models, strain files)."""


class TrainingError(Exception):
    """Numerical failure during training (non-finite loss)."""
