"""Exception hierarchy shared across the engine."""


class EquiscopeError(Exception):
    """Base class for all engine errors."""


class BundleError(EquiscopeError):
    """Fatal problem with an evidence bundle (missing manifest, roster too small)."""


class ConfigError(EquiscopeError):
    """Invalid analysis configuration. ``path`` names the offending entry."""

    def __init__(self, message: str, path: str = ""):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class ProviderError(EquiscopeError):
    """Language-model provider failure (transport, schema, or outage)."""
