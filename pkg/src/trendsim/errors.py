"""Exception taxonomy shared across the pipeline.

The CLI maps these onto exit codes: ConfigError -> 1, InputError -> 2,
BackendError -> 3.
"""


class TrendsimError(Exception):
    """Base class for all pipeline errors."""


class ConfigError(TrendsimError):
    """Invalid or inconsistent run configuration."""


class InputError(TrendsimError):
    """Unreadable or malformed input data (corpus files, lexicon files)."""


class BackendError(TrendsimError):
    """Embedding backend failure (unreachable service, protocol violation).

    Retriable at the call site; distinct from an out-of-vocabulary MISS.
    """
