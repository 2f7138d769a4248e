"""Closed-form infinite square well (V = 0 on ``0 < x < L``) for the deformed momentum.

Two families live here.

``eigenfunction`` / ``normalization_sq`` / ``wavenumber_sq`` / ``energy``
    The closed forms built on the Euler equation
    ``u^2 phi'' + 3 u phi' + b phi = 0`` with ``u = 1 + gamma x``.  Their
    eigenfunctions carry a ``1/u`` prefactor, and the energies sit
    ``3 hbar^2 gamma^2 / 8m`` above the undeformed-constant model.

``hermitian_eigenfunction`` / ``hermitian_energy``
    The exact Dirichlet eigenpairs of ``-hbar^2/2m D_gamma^2``.  Expanding
    ``D_gamma^2`` gives ``u^2 phi'' + 2 u phi' + (1/4 + 2mE/hbar^2 gamma^2) phi``.
    Its solutions carry a ``u^(-1/2)`` prefactor and have no energy offset.
    These are what :mod:`pdmwell.numeric_solver` converges to.

Everything is written with ``log1p`` so that ``gamma -> 0`` is smooth, and
``gamma == 0`` returns the ordinary box exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from pdmwell.grid import PhysicalParams

__all__ = [
    "WellSolution",
    "ode_coefficients",
    "general_solution",
    "eigenfunction",
    "normalization_sq",
    "wavenumber_sq",
    "energy",
    "energy_bound",
    "reference_energy_ref3",
    "hermitian_energy",
    "hermitian_eigenfunction",
    "well_solution",
]


def _check_n(n):
    if int(n) != n or n < 1:
        raise ValueError(f"quantum number must be a positive integer, got {n!r}")
    return int(n)


def _log_width(p: PhysicalParams) -> float:
    """``ln(1 + gamma L)``."""
    return math.log1p(p.gamma * p.L)


def _gamma_over_log(p: PhysicalParams) -> float:
    """``gamma / ln(1 + gamma L)``, equal to ``1/L`` at ``gamma = 0``."""
    g = p.gamma * p.L
    if g == 0.0:
        return 1.0 / p.L
    return g / math.log1p(g) / p.L


def ode_coefficients(p: PhysicalParams, E: float) -> tuple[float, float]:
    """Coefficients ``(a, b)`` of ``u^2 phi'' + a u phi' + b phi = 0``.

    ``a = 3`` and ``b = 2m (E + hbar^2 gamma^2 / 8m) / (hbar^2 gamma^2)``.
    """
    if p.gamma == 0.0:
        raise ValueError("the u-equation is undefined at gamma = 0")
    shifted = E + p.hbar**2 * p.gamma**2 / (8.0 * p.mass)
    return 3.0, 2.0 * p.mass * shifted / (p.hbar**2 * p.gamma**2)


def general_solution(u, k_sq_over_gamma_sq: float, sign: int = 1):
    """``u^-1 exp(+/- i sqrt(k^2/gamma^2 - 1) ln u)``; solves the ``a = 3`` equation."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if not k_sq_over_gamma_sq > 1.0:
        raise ValueError("need k^2/gamma^2 > 1 for an oscillatory solution")
    ua = np.asarray(u, dtype=float)
    if np.any(ua <= 0.0):
        raise ValueError("general_solution requires u > 0")
    nu = math.sqrt(k_sq_over_gamma_sq - 1.0)
    out = np.exp(1j * sign * nu * np.log(ua)) / ua
    return out if ua.ndim else complex(out)


def normalization_sq(n: int, p: PhysicalParams) -> float:
    """``|A_n|^2 = 2/L + 2 gamma + (1 + gamma L) ln^2(1 + gamma L) / (2 n^2 pi^2 L)``."""
    n = _check_n(n)
    lw = _log_width(p)
    return 2.0 / p.L + 2.0 * p.gamma + (1.0 + p.gamma * p.L) * lw * lw / (
        2.0 * n * n * math.pi**2 * p.L
    )


def _sine_phase(n: int, x: np.ndarray, p: PhysicalParams) -> np.ndarray:
    """``n pi ln(1 + gamma x) / ln(1 + gamma L)``, continuous through gamma = 0."""
    if p.gamma == 0.0:
        return n * math.pi * x / p.L
    return n * math.pi * np.log1p(p.gamma * x) / _log_width(p)


def eigenfunction(n: int, x, p: PhysicalParams):
    """``A_n / (1 + gamma x) * sin(n pi ln(1 + gamma x) / ln(1 + gamma L))`` inside the well.

    ``A_n`` is the positive root of :func:`normalization_sq`.  Zero at and
    outside the walls.
    """
    n = _check_n(n)
    xa = np.asarray(x, dtype=float)
    inside = (xa > 0.0) & (xa < p.L)
    xi = np.where(inside, xa, 0.5 * p.L)
    amp = math.sqrt(normalization_sq(n, p))
    vals = amp / (1.0 + p.gamma * xi) * np.sin(_sine_phase(n, xi, p))
    out = np.where(inside, vals, 0.0)
    return out if xa.ndim else float(out)


def hermitian_eigenfunction(n: int, x, p: PhysicalParams):
    """Exact normalized Dirichlet eigenfunction of ``-hbar^2/2m D_gamma^2``.

    ``sqrt(2 gamma / ln(1 + gamma L)) (1 + gamma x)^(-1/2) sin(n pi ln(1 + gamma x) / ln(1 + gamma L))``;
    reduces to ``sqrt(2/L) sin(n pi x / L)`` at ``gamma = 0``.
    """
    n = _check_n(n)
    xa = np.asarray(x, dtype=float)
    inside = (xa > 0.0) & (xa < p.L)
    xi = np.where(inside, xa, 0.5 * p.L)
    amp = math.sqrt(2.0 * _gamma_over_log(p))
    vals = amp / np.sqrt(1.0 + p.gamma * xi) * np.sin(_sine_phase(n, xi, p))
    out = np.where(inside, vals, 0.0)
    return out if xa.ndim else float(out)


def wavenumber_sq(n: int, p: PhysicalParams) -> float:
    """``k_n^2 = gamma^2 (1 + n^2 pi^2 / ln^2(1 + gamma L))``; ``(n pi / L)^2`` at gamma = 0."""
    n = _check_n(n)
    r = _gamma_over_log(p)
    return p.gamma**2 + (n * math.pi * r) ** 2


def hermitian_energy(n: int, p: PhysicalParams) -> float:
    """Exact Dirichlet eigenvalue ``n^2 pi^2 hbar^2 gamma^2 / (2m ln^2(1 + gamma L))``."""
    n = _check_n(n)
    r = _gamma_over_log(p)
    return (n * math.pi * p.hbar * r) ** 2 / (2.0 * p.mass)


def energy_bound(p: PhysicalParams) -> float:
    """``3 hbar^2 gamma^2 / 8m``."""
    return 3.0 * p.hbar**2 * p.gamma**2 / (8.0 * p.mass)


def energy(n: int, p: PhysicalParams) -> float:
    """``n^2 pi^2 hbar^2 gamma^2 / (2m ln^2(1 + gamma L)) + 3 hbar^2 gamma^2 / 8m``.

    This is ``hbar^2 k_n^2 / 2m - hbar^2 gamma^2 / 8m``.  At gamma = 0 it
    is ``n^2 pi^2 hbar^2 / (2 m L^2)``.
    """
    return hermitian_energy(n, p) + energy_bound(p)


def reference_energy_ref3(n: int, p: PhysicalParams) -> float:
    """Spectrum of the model built on the non-Hermitian momentum, i.e. :func:`energy` minus ``3 hbar^2 gamma^2 / 8m``."""
    return hermitian_energy(n, p)


@dataclass(frozen=True)
class WellSolution:
    n: int
    params: PhysicalParams
    A_n_sq: float
    k_n_sq: float
    E_n: float
    E_shifted: float

    def __post_init__(self):
        if not self.A_n_sq > 0:
            raise ValueError("A_n^2 must be positive")
        if self.params.gamma != 0 and not self.k_n_sq > self.params.gamma**2:
            raise ValueError("k_n^2 must exceed gamma^2")

    def __call__(self, x):
        return eigenfunction(self.n, x, self.params)


def well_solution(n: int, p: PhysicalParams) -> WellSolution:
    E = energy(n, p)
    return WellSolution(
        n=_check_n(n),
        params=p,
        A_n_sq=normalization_sq(n, p),
        k_n_sq=wavenumber_sq(n, p),
        E_n=E,
        E_shifted=E + p.hbar**2 * p.gamma**2 / (8.0 * p.mass),
    )
