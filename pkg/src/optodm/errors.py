"""Exception types mapped to CLI exit codes.

ValueError (including ConfigError) -> exit 2, InfeasibleError -> exit 3,
OSError -> exit 4.
"""


class ConfigError(ValueError):
    """Invalid, unknown, or missing configuration input."""


class InfeasibleError(RuntimeError):
    """Requested operation has no physical solution at these parameters."""


class UnresolvedResonanceError(InfeasibleError):
    """Thermal + backaction peak sits below the imprecision floor, so no
    detection bandwidth exists."""
