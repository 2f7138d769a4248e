"""Scalar algebra of the deformed translation group.

A deformed displacement moves ``x`` to ``x + dx (1 + gamma x)``.  Two such
steps compose through the deformed sum ``a + b + gamma a b``, which is the
same law obeyed by the product of q-exponentials when ``gamma = 1 - q``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Deformation",
    "deformed_add",
    "deformed_inverse",
    "q_exp",
    "point_translate",
    "deformed_coordinate",
    "inverse_deformed_coordinate",
]


@dataclass(frozen=True)
class Deformation:
    """Deformation strength ``gamma`` (units of 1/length)."""

    gamma: float

    def __post_init__(self):
        if not math.isfinite(self.gamma):
            raise ValueError(f"gamma must be finite, got {self.gamma!r}")


def _gamma(d) -> float:
    return d.gamma if isinstance(d, Deformation) else float(d)


def deformed_add(a: float, b: float, d: Deformation | float) -> float:
    """Return ``a (+) b = a + b + gamma a b``."""
    return a + b + _gamma(d) * (a * b)


def deformed_inverse(a: float, d: Deformation | float) -> float:
    """Element ``b`` with ``deformed_add(a, b) == 0``; requires ``1 + gamma a != 0``."""
    g = _gamma(d)
    den = 1.0 + g * a
    if den == 0.0:
        raise ValueError("1 + gamma*a = 0 has no deformed inverse")
    return -a / den


def q_exp(x: float, q: float) -> float:
    """Tsallis q-exponential ``[1 + (1-q) x]^(1/(1-q))``, ``exp(x)`` at ``q = 1``.

    Raises
    ------
    ValueError
        If ``1 + (1-q) x <= 0`` for ``q != 1``.
    """
    if q == 1.0:
        return math.exp(x)
    r = 1.0 - q
    base = 1.0 + r * x
    if base <= 0.0:
        raise ValueError(f"q_exp undefined: 1 + (1-q)x = {base!r} <= 0")
    # exp(log1p(r x) / r) stays accurate as q -> 1
    return math.exp(math.log1p(r * x) / r)


def point_translate(x: float, dx: float, d: Deformation | float) -> float:
    """Image of the point ``x`` under a deformed displacement by ``dx``."""
    return x + dx * (1.0 + _gamma(d) * x)


def deformed_coordinate(x, d: Deformation | float):
    """Map ``x`` to ``s = ln(1 + gamma x) / gamma`` (``s = x`` at ``gamma = 0``).

    Works elementwise on numpy arrays.  ``1 + gamma x`` must be positive.
    """
    g = _gamma(d)
    xa = np.asarray(x, dtype=float)
    if g == 0.0:
        return xa if xa.ndim else float(xa)
    if np.any(1.0 + g * xa <= 0.0):
        raise ValueError("deformed_coordinate requires 1 + gamma*x > 0")
    s = np.log1p(g * xa) / g
    return s if xa.ndim else float(s)


def inverse_deformed_coordinate(s, d: Deformation | float):
    """Inverse of :func:`deformed_coordinate`: ``x = (exp(gamma s) - 1) / gamma``."""
    g = _gamma(d)
    sa = np.asarray(s, dtype=float)
    if g == 0.0:
        return sa if sa.ndim else float(sa)
    x = np.expm1(g * sa) / g
    return x if sa.ndim else float(x)
