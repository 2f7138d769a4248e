"""Physical parameters and uniform grids in the physical or deformed coordinate."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from pdmwell.deformed_algebra import deformed_coordinate, inverse_deformed_coordinate

__all__ = ["PhysicalParams", "Coordinate", "Grid", "WaveFunction", "make_grid", "simpson_weights"]

# gamma*L must stay above -1 by this margin so ln(1 + gamma L) is finite
GAMMA_L_FLOOR = -1.0 + 1e-9


@dataclass(frozen=True)
class PhysicalParams:
    """Constants of the model in a consistent unit system.

    ``gamma * L > -1`` is enforced so that ``1 + gamma x`` stays positive on
    the whole well ``[0, L]``.
    """

    hbar: float = 1.0
    mass: float = 1.0
    L: float = 1.0
    gamma: float = 0.0

    def __post_init__(self):
        for name in ("hbar", "mass", "L"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be positive and finite, got {v!r}")
        if not math.isfinite(self.gamma):
            raise ValueError(f"gamma must be finite, got {self.gamma!r}")
        if self.gamma * self.L <= GAMMA_L_FLOOR:
            raise ValueError(
                f"gamma*L = {self.gamma * self.L!r} must exceed -1 "
                "(1 + gamma x must stay positive on [0, L])"
            )

    @classmethod
    def from_gamma_tilde(cls, gamma_tilde: float, hbar=1.0, mass=1.0, L=1.0):
        """Build parameters from the dimensionless ``gamma_tilde = gamma L``."""
        return cls(hbar=hbar, mass=mass, L=L, gamma=gamma_tilde / L)

    @property
    def gamma_tilde(self) -> float:
        return self.gamma * self.L

    @property
    def s_length(self) -> float:
        """Well width in the deformed coordinate, ``ln(1 + gamma L) / gamma``."""
        return float(deformed_coordinate(self.L, self.gamma))


class Coordinate(str, Enum):
    physical_x = "physical_x"
    deformed_s = "deformed_s"


@dataclass(frozen=True, eq=False)
class Grid:
    """Uniform grid including both walls.

    For ``deformed_s`` grids, ``points`` holds the ``s`` values and
    :attr:`x` gives their (non-uniform) images in the physical coordinate.
    """

    coordinate: Coordinate
    points: np.ndarray
    spacing: float
    params: PhysicalParams

    @property
    def size(self) -> int:
        return self.points.size

    @property
    def n_interior(self) -> int:
        return self.points.size - 2

    @property
    def x(self) -> np.ndarray:
        if self.coordinate is Coordinate.physical_x:
            return self.points
        return inverse_deformed_coordinate(self.points, self.params.gamma)

    @property
    def interior(self) -> np.ndarray:
        return self.points[1:-1]

    @property
    def midpoints(self) -> np.ndarray:
        return 0.5 * (self.points[1:] + self.points[:-1])

    def jacobian(self) -> np.ndarray:
        """``dx/d(coordinate)`` at the grid nodes (``1 + gamma x`` on s-grids)."""
        if self.coordinate is Coordinate.physical_x:
            return np.ones_like(self.points)
        return 1.0 + self.params.gamma * self.x

    def same_as(self, other: "Grid") -> bool:
        return (
            self.coordinate is other.coordinate
            and self.params == other.params
            and self.points.shape == other.points.shape
            and np.array_equal(self.points, other.points)
        )


def make_grid(params: PhysicalParams, n_points: int, coordinate="physical_x") -> Grid:
    """Uniform grid with ``n_points`` nodes spanning the well, walls included."""
    coordinate = Coordinate(coordinate)
    if n_points < 3:
        raise ValueError(f"need at least 3 grid points, got {n_points}")
    if coordinate is Coordinate.physical_x:
        end = params.L
    else:
        end = params.s_length
    points = np.linspace(0.0, end, n_points)
    points[-1] = end
    points.flags.writeable = False
    return Grid(coordinate, points, end / (n_points - 1), params)


def simpson_weights(n_points: int, spacing: float) -> np.ndarray:
    """Composite Simpson weights for an odd number of uniform samples."""
    if n_points < 3 or n_points % 2 == 0:
        raise ValueError(
            f"composite Simpson needs an odd number (>= 3) of points, got {n_points}"
        )
    w = np.ones(n_points)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return w * (spacing / 3.0)


@dataclass(frozen=True, eq=False)
class WaveFunction:
    """Complex samples of a state at every node of ``grid`` (walls included).

    On a ``deformed_s`` grid the samples are still values of the physical
    wave function, only taken at the nodes ``x(s_j)``.
    """

    samples: np.ndarray
    grid: Grid

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=complex)
        if samples.shape != self.grid.points.shape:
            raise ValueError(
                f"samples shape {samples.shape} does not match grid {self.grid.points.shape}"
            )
        if not np.all(np.isfinite(samples)):
            raise ValueError("wave function samples must be finite")
        object.__setattr__(self, "samples", samples)

    @property
    def norm_sq(self) -> float:
        """Simpson quadrature of ``|psi|^2 dx``."""
        cached = self.__dict__.get("_norm_sq")
        if cached is None:
            w = simpson_weights(self.grid.size, self.grid.spacing)
            dens = np.abs(self.samples) ** 2 * self.grid.jacobian()
            cached = float(w @ dens)
            object.__setattr__(self, "_norm_sq", cached)
        return cached

    def normalized(self) -> "WaveFunction":
        return WaveFunction(self.samples / np.sqrt(self.norm_sq), self.grid)

    @property
    def interior(self) -> np.ndarray:
        return self.samples[1:-1]
