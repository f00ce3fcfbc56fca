"""Exception hierarchy shared by all modules.

The CLI maps these onto process exit codes, so every failure mode that can
reach a user has a distinct type.
"""


class ToolkitError(Exception):
    """Base class for all errors raised by this package."""


class ShapeError(ToolkitError):
    """Array dimensions or grids do not match."""


class DomainError(ToolkitError):
    """Grid does not cover the state (boundary amplitude too large)."""


class RangeError(ToolkitError):
    """Requested time lies outside the available data."""


class ArgumentError(ToolkitError):
    """Argument outside its documented domain (e.g. p < 1)."""


class NumericalConsistencyError(ToolkitError):
    """An internal consistency check failed (e.g. imaginary residue)."""


class AccuracyError(ToolkitError):
    """Integration accuracy monitor failed (e.g. Wronskian drift)."""


class StabilityError(ToolkitError):
    """Explicit time stepping is unstable at the requested step size."""


class ConfigError(ToolkitError):
    """Run configuration is invalid."""


class CheckViolationError(ToolkitError):
    """The inequality suite found violations."""
