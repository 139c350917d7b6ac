"""Exception types shared across the package."""


class ResourceLimitError(ValueError):
    """A size cap (partition enumeration, word length, oracle bounds) was exceeded."""


class TruncationError(ValueError):
    """An operator application would leave the truncated Fock or free-product space."""


class TailBoundError(ArithmeticError):
    """A Poisson-weighted series could not be certified to the requested tolerance."""


class ConfigError(ValueError):
    """Invalid experiment configuration."""


class OracleMismatch(AssertionError):
    """Two independent routes to the same quantity disagreed."""
