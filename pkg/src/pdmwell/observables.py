"""Quadrature, expectation values and probability densities."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from pdmwell.analytic_well import eigenfunction
from pdmwell.grid import Grid, PhysicalParams, WaveFunction, make_grid, simpson_weights
from pdmwell.operators import build_momentum_hermitian, build_momentum_nonhermitian

__all__ = [
    "WaveFunction",
    "Density2D",
    "integrate",
    "expectation_x",
    "expectation_x_quadrature",
    "expectation_x_state",
    "expectation_p_gamma",
    "density_2d",
]


def integrate(f, spacing) -> float:
    """Composite Simpson rule for uniform samples ``f`` (odd count, >= 3).

    ``spacing`` is the step or a :class:`~pdmwell.grid.Grid`.
    """
    if isinstance(spacing, Grid):
        spacing = spacing.spacing
    f = np.asarray(f)
    return float(simpson_weights(f.size, spacing) @ f)


def _xlogx_minus(g: float) -> float:
    """``(1 + g) ln(1 + g) - g`` without cancellation for small ``g``."""
    if abs(g) < 0.1:
        # sum_{k>=2} (-1)^k g^k / (k (k - 1))
        total, term = 0.0, g
        for k in range(2, 40):
            term *= -g if k > 2 else g
            total += term / (k * (k - 1))
        return total
    return (1.0 + g) * math.log1p(g) - g


def expectation_x(n: int, p: PhysicalParams) -> float:
    """Closed-form ``<x>`` in the state :func:`~pdmwell.analytic_well.eigenfunction`.

    ``(1 + gL) ln(1 + gL) / (L g^2) (1 + ln^2(1 + gL) / (4 pi^2 n^2)) - 1/g``
    rearranged to stay accurate as ``g -> 0``, where it tends to ``L/2``.
    """
    if int(n) != n or n < 1:
        raise ValueError(f"quantum number must be a positive integer, got {n!r}")
    g = p.gamma * p.L
    if g == 0.0:
        return 0.5 * p.L
    lw = math.log1p(g)
    # the first term is O(1); the second is (1 + g) lw^3 / g^2 = O(g)
    main = _xlogx_minus(g) / (g * g)
    tail = (1.0 + g) * lw * (lw / g) ** 2 / (4.0 * math.pi**2 * n * n)
    return p.L * (main + tail)


def expectation_x_state(psi: WaveFunction) -> float:
    """``int x |psi|^2 dx / int |psi|^2 dx`` by Simpson quadrature."""
    g = psi.grid
    dens = np.abs(psi.samples) ** 2 * g.jacobian()
    w = simpson_weights(g.size, g.spacing)
    return float(w @ (g.x * dens)) / float(w @ dens)


def expectation_x_quadrature(n: int, p: PhysicalParams, N: int = 4001) -> float:
    """Simpson quadrature of ``x |phi_n|^2`` on an ``N``-point x grid."""
    grid = make_grid(p, N)
    phi = eigenfunction(n, grid.points, p)
    return integrate(grid.points * phi * phi, grid)


def expectation_p_gamma(
    n: int, p: PhysicalParams, N: int = 4001, operator: str = "hermitian"
) -> complex:
    """``<phi_n| p_gamma |phi_n>`` from the discrete momentum matrix.

    The inner product is ``h * sum`` over interior nodes (the trapezoid rule
    with zero wall values), under which the Hermitian matrix is exactly
    self-adjoint.  For a real state the Hermitian result is zero up to
    rounding.  ``operator="nonhermitian"`` returns the diagnostic value,
    whose imaginary part is close to ``hbar gamma / 2``.
    """
    if N % 2 == 0 or N < 3:
        raise ValueError(f"N must be odd and >= 3, got {N}")
    grid = make_grid(p, N)
    if operator == "hermitian":
        P = build_momentum_hermitian(grid, p)
    elif operator == "nonhermitian":
        P = build_momentum_nonhermitian(grid, p)
    else:
        raise ValueError(f"unknown operator {operator!r}")
    phi = eigenfunction(n, grid.interior, p).astype(complex)
    h = grid.spacing
    num = h * np.vdot(phi, P @ phi)
    den = h * np.vdot(phi, phi).real
    return complex(num / den)


@dataclass(frozen=True, eq=False)
class Density2D:
    """``|phi_n1(x) phi_n2(y)|^2`` on a square grid; ``values[i, j]`` is at ``(x[i], y[j])``."""

    n1: int
    n2: int
    x: np.ndarray
    values: np.ndarray

    @property
    def y(self) -> np.ndarray:
        return self.x

    def total(self) -> float:
        """Double Simpson quadrature of the density."""
        w = simpson_weights(self.x.size, self.x[1] - self.x[0])
        return float(w @ self.values @ w)

    def argmax(self) -> tuple[float, float]:
        i, j = np.unravel_index(np.argmax(self.values), self.values.shape)
        return float(self.x[i]), float(self.x[j])


def density_2d(n1: int, n2: int, p: PhysicalParams, resolution: int = 257) -> Density2D:
    """Separable two-dimensional well density on ``[0, L]^2`` with the same deformation on both axes."""
    if resolution < 3 or resolution % 2 == 0:
        raise ValueError(f"resolution must be odd and >= 3, got {resolution}")
    x = make_grid(p, resolution).points
    a = eigenfunction(n1, x, p)
    b = eigenfunction(n2, x, p)
    values = np.outer(a * a, b * b)
    return Density2D(int(n1), int(n2), x, values)
