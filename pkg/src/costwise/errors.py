"""Shared exception types."""


class ConfigError(ValueError):
    """Invalid experiment configuration."""


class NumericalError(RuntimeError):
    """A numerical procedure failed to reach its accuracy target."""
