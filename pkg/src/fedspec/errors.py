"""Exception types shared across the package."""


class ConfigError(ValueError):
    """A scenario configuration is malformed or violates an invariant.

    Raised by config loading/validation and by operations whose
    preconditions are configuration-level (e.g. a pairing radius larger
    than the deployment area). Subclasses ValueError so callers guarding
    against bad inputs generically still catch it; the CLI maps it to
    exit code 1.
    """
