"""Exceptions raised by the numerical operations.

Non-fatal numerical outcomes (a power iteration that stops at its cap, a Picard iteration
running out of steps, an inconclusive decay fit) are flagged on result objects instead.
"""
from __future__ import annotations


class ParameterError(ValueError):
    """Raised for invalid or out-of-range model and discretization parameters."""


class ConfigError(ParameterError):
    """Raised when a run configuration contains unknown keys or invalid values."""


class ShapeError(ValueError):
    """Raised when grids, truncation orders or coefficient dimensions don't match."""


class DomainError(ArithmeticError):
    """Raised when a density loses positivity, so Maxwellians cannot be formed.

    Carries where it happened (`step` is an iteration index or a time) and the offending minimum.
    """

    def __init__(self, msg: str, step: int | float | None = None, minimum: float | None = None):
        super().__init__(msg)
        self.step = step
        self.minimum = minimum


class ConditioningError(ArithmeticError):
    """Raised when the velocity grid cannot resolve the requested basis order."""

    def __init__(self, msg: str, max_order: int | None = None):
        super().__init__(msg)
        self.max_order = max_order
