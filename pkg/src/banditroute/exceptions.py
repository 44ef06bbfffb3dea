"""Exception hierarchy shared across the package.

The CLI maps these onto process exit codes, so commands can distinguish
bad configuration from bad data files from numerical blow-ups.
"""


class BanditRouteError(Exception):
    """Base class for all errors raised by this package."""


class ConfigurationError(BanditRouteError):
    """Invalid parameter, preset name, or run-config content. Exit code 2."""


class DataFormatError(BanditRouteError):
    """Malformed or inconsistent persisted data (datasets, embeddings,
    checkpoints, logs). Exit code 3."""


class MissingEntryError(DataFormatError):
    """A required (query, arm) outcome or embedding row is absent."""


class EmptyTrainingSetError(DataFormatError):
    """Label derivation filtered out every training example."""


class NumericError(BanditRouteError):
    """A non-finite value appeared where training must abort. Exit code 4."""
