"""Exception hierarchy.

Exit-code mapping used by the CLI: ConfigError -> 2, BudgetError -> 3,
InternalError -> 4.
"""


class CoxdivError(Exception):
    """Base class for all package errors."""


class ConfigError(CoxdivError):
    """Invalid configuration or input file."""


class UnsupportedLabelError(ConfigError):
    """Coxeter matrix label outside {1, 2, 3, 4, 6, inf}."""


class InternalError(CoxdivError):
    """An internal invariant was violated (signals a bug)."""


class SphericalSystemError(CoxdivError):
    """Operation requires a non-spherical (infinite) Coxeter system."""


class SameWallError(CoxdivError):
    """Parallelism test called on a wall against itself."""


class TooLargeError(CoxdivError):
    """Input exceeds an exact-solver bound (e.g. the clique solver)."""


class BudgetError(CoxdivError):
    """A configured resource budget was exceeded."""


class MemoryBudgetError(BudgetError):
    """Vertex/memory budget exceeded during graph exploration."""

    def __init__(self, message, radius_reached=None):
        super().__init__(message)
        self.radius_reached = radius_reached


class SpanBudgetError(BudgetError):
    """Laurent entry support span exceeded the configured degree bound."""


class ClosureOverflowError(InternalError):
    """Small-root closure exceeded its bound (signals a rule bug)."""


class DetViolationError(InternalError):
    """A matrix product failed the determinant-one check."""


class NonTransitiveUnsupportedError(CoxdivError):
    """Divergence over all centers needs transitivity or an explicit c-sample."""
