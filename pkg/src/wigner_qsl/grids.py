"""Uniform grids and the rectangle-rule quadrature used throughout.

All integrals and traces in the package are discretized on these grids.
Full weight is assigned to every node (no trapezoid edge correction); the
accuracy contract assumes integrands that are negligible at the boundary,
which holds for the Gaussian states this package works with.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import ArgumentError, ShapeError


@dataclass(frozen=True)
class UniformGrid1D:
    """Closed-interval grid: points are exactly min + k*spacing, k = 0..n-1."""

    min: float
    max: float
    n: int
    points: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 2:
            raise ArgumentError(f"grid needs at least 2 points, got n={self.n}")
        if not self.max > self.min:
            raise ArgumentError(f"grid needs max > min, got [{self.min}, {self.max}]")
        object.__setattr__(
            self, "points", self.min + np.arange(self.n) * self.spacing
        )

    @property
    def spacing(self) -> float:
        return (self.max - self.min) / (self.n - 1)

    def same_axis(self, other: "UniformGrid1D") -> bool:
        return self.n == other.n and self.min == other.min and self.max == other.max


@dataclass(frozen=True)
class PhaseGrid:
    """Tensor grid over phase space; x rows, p columns."""

    x: UniformGrid1D
    p: UniformGrid1D

    @property
    def d_gamma(self) -> float:
        """Phase-space area element."""
        return self.x.spacing * self.p.spacing

    @property
    def shape(self) -> tuple[int, int]:
        return (self.x.n, self.p.n)

    def meshes(self) -> tuple[np.ndarray, np.ndarray]:
        """(X, P) arrays of shape (n_x, n_p)."""
        return np.meshgrid(self.x.points, self.p.points, indexing="ij")

    def same_grid(self, other: "PhaseGrid") -> bool:
        return self.x.same_axis(other.x) and self.p.same_axis(other.p)


def integrate_2d(f: np.ndarray, grid: PhaseGrid) -> float:
    """Rectangle-rule integral over phase space: d_gamma * sum(f)."""
    f = np.asarray(f)
    if f.shape != grid.shape:
        raise ShapeError(f"field shape {f.shape} != grid shape {grid.shape}")
    return grid.d_gamma * float(np.sum(f))
