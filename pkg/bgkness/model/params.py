"""Model constants and the velocity discretization."""
from __future__ import annotations

from dataclasses import dataclass, replace
from math import isfinite, sqrt

import numpy as np
import rich.repr

from ..errors import ParameterError, ShapeError


@dataclass(frozen=True)
@rich.repr.auto
class ModelParams:
    """Coupling strength `alpha` and the two reservoir temperatures.

    Unit mass is assumed throughout, so the uniform state's temperature and pressure coincide.
    """

    alpha: float
    t1: float
    t2: float

    def __post_init__(self):
        if not (isfinite(self.alpha) and 0.0 <= self.alpha <= 1.0):
            raise ParameterError(f"alpha must lie in [0, 1], got {self.alpha}")

        for name in ("t1", "t2"):
            value = getattr(self, name)
            if not (isfinite(value) and value > 0):
                raise ParameterError(f"{name} must be a positive temperature, got {value}")

    @property
    def t_inf(self) -> float:
        return (self.t1 + self.t2) / 2

    @property
    def p_inf(self) -> float:
        return (self.t1 + self.t2) / 2

    @property
    def t_max(self) -> float:
        return max(self.t1, self.t2)

    def replace(self, **kwds) -> ModelParams:
        return replace(self, **kwds)

    def __rich_repr__(self):
        yield "alpha", self.alpha
        yield "t1", self.t1
        yield "t2", self.t2
        yield "t_inf", self.t_inf


@dataclass(frozen=True, eq=False)
class VelocityGrid:
    """Symmetric uniform velocity nodes with trapezoid weights.

    Nodes are built as exact half-integer multiples of the spacing, so that `nodes[::-1]` equals
    `-nodes` bit for bit and even functions sampled on the grid are exactly even.
    """

    nodes: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        weights = np.asarray(self.weights, dtype=float)

        if nodes.ndim != 1 or nodes.shape != weights.shape:
            raise ShapeError("Velocity nodes and weights must be 1d arrays of equal length.")
        if len(nodes) < 3:
            raise ParameterError(f"Need at least 3 velocity nodes, got {len(nodes)}.")
        if not np.array_equal(nodes[::-1], -nodes) or not np.array_equal(weights[::-1], weights):
            raise ParameterError("Velocity grid must be symmetric about 0 with symmetric weights.")
        if np.any(weights <= 0) or np.any(np.diff(nodes) <= 0):
            raise ParameterError("Velocity nodes must increase and weights must be positive.")

        nodes.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def uniform(cls, cutoff: float, n: int = 512) -> VelocityGrid:
        if not cutoff > 0:
            raise ParameterError(f"Velocity cutoff must be positive, got {cutoff}.")

        step = 2 * cutoff / (n - 1)
        nodes = step * (np.arange(n) - (n - 1) / 2)
        weights = np.full(n, step)
        weights[[0, -1]] = step / 2
        return cls(nodes, weights)

    @classmethod
    def for_params(cls, params: ModelParams, n: int = 512, scale: float = 8.0) -> VelocityGrid:
        """Default grid, cutting off at `scale` standard deviations of the hotter reservoir."""
        return cls.uniform(scale * sqrt(params.t_max), n)

    @classmethod
    def for_moments(
        cls, params: ModelParams, order: int, n: int = 1024, margin: float = 8.0
    ) -> VelocityGrid:
        """Grid wide enough to resolve polynomial moments of f∞ up to `order`.

        The integrand v^order·M_T peaks at √order standard deviations; the cutoff leaves
        `margin` more beyond that peak.
        """
        return cls.uniform((sqrt(order) + margin) * sqrt(params.t_max), n)

    @property
    def cutoff(self) -> float:
        return float(self.nodes[-1])

    @property
    def size(self) -> int:
        return len(self.nodes)

    def integrate(self, values: np.ndarray) -> np.ndarray:
        """Quadrature over the last axis."""
        values = np.asarray(values)
        if values.shape[-1] != self.size:
            raise ShapeError(f"Expected {self.size} velocity values, got {values.shape[-1]}.")
        return values @ self.weights

    def moment(self, values: np.ndarray, order: int) -> np.ndarray:
        return self.integrate(np.asarray(values) * self.nodes**order)

    def matches(self, other: VelocityGrid) -> bool:
        if self is other:
            return True
        return np.array_equal(self.nodes, other.nodes) and np.array_equal(
            self.weights, other.weights
        )

    def check(self, other: VelocityGrid):
        if not self.matches(other):
            raise ShapeError("Fields live on different velocity grids.")

    def __rich_repr__(self):
        yield "size", self.size
        yield "cutoff", self.cutoff
