"""Finite-difference eigensolver for the V = 0 deformed well.

The default path works in the deformed coordinate ``s = ln(1 + gamma x) / gamma``.
There ``D_gamma = d/ds + gamma/2``, and ``chi = exp(gamma s / 2) phi`` turns
``-hbar^2/2m D_gamma^2`` into the constant-coefficient ``-hbar^2/2m d^2/ds^2``.
The resulting symmetric tridiagonal eigenproblem is solved by the in-repo
:func:`eigen_symmetric_tridiagonal`.  :func:`solve_well_xgrid` discretizes
the same Hamiltonian directly on a uniform ``x`` grid as an independent
cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from pdmwell.grid import Coordinate, Grid, PhysicalParams, WaveFunction, make_grid
from pdmwell.operators import build_hamiltonian, kinetic_rayleigh_quotient

__all__ = [
    "EigenSolverError",
    "EigenSolution",
    "eigen_symmetric_tridiagonal",
    "solve_well",
    "solve_well_xgrid",
    "solve_well_refined",
    "richardson_refine",
    "Refinement",
]

MAX_SWEEPS = 100
EIG_TOL = 1e-12
_SECTIONS = 31
_MAX_INVERSE_ITERATIONS = 8


class EigenSolverError(RuntimeError):
    """Eigenvalue or eigenvector iteration hit its cap."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


def _sturm_counts(d, e2, x, pivmin):
    """Number of eigenvalues strictly below each entry of ``x``."""
    x = np.asarray(x, dtype=float)
    count = np.zeros(x.shape, dtype=np.int64)
    q = d[0] - x
    q = np.where(np.abs(q) < pivmin, -pivmin, q)
    count += q < 0
    for i in range(1, d.size):
        q = (d[i] - x) - e2[i - 1] / q
        q = np.where(np.abs(q) < pivmin, -pivmin, q)
        count += q < 0
    return count


def _bisect(d, e, K, tol):
    n = d.size
    absd = np.abs(d)
    r = np.zeros(n)
    r[:-1] += np.abs(e)
    r[1:] += np.abs(e)
    lo0 = float(np.min(d - r))
    hi0 = float(np.max(d + r))
    scale = max(abs(lo0), abs(hi0), float(absd.max()) if n else 0.0, np.finfo(float).tiny)
    lo0 -= 2 * np.finfo(float).eps * scale + 1e-300
    hi0 += 2 * np.finfo(float).eps * scale + 1e-300
    e2 = e * e
    pivmin = np.finfo(float).tiny * max(1.0, float(np.max(e2)) if e2.size else 1.0)
    atol = max(tol * scale, 4 * np.finfo(float).eps * scale)

    target = np.arange(K)
    lo = np.full(K, lo0)
    hi = np.full(K, hi0)
    fractions = np.arange(1, _SECTIONS + 1) / (_SECTIONS + 1)
    for sweep in range(MAX_SWEEPS):
        active = (hi - lo) > atol
        if not active.any():
            break
        idx = np.nonzero(active)[0]
        pts = lo[idx, None] + (hi[idx] - lo[idx])[:, None] * fractions[None, :]
        counts = _sturm_counts(d, e2, pts, pivmin)
        below = counts <= target[idx, None]
        # last point still below the target eigenvalue, first point above it
        n_below = below.sum(axis=1)
        new_lo = np.where(n_below > 0, pts[np.arange(idx.size), np.maximum(n_below - 1, 0)], lo[idx])
        new_hi = np.where(n_below < _SECTIONS, pts[np.arange(idx.size), np.minimum(n_below, _SECTIONS - 1)], hi[idx])
        stalled = (new_lo == lo[idx]) & (new_hi == hi[idx])
        lo[idx] = new_lo
        hi[idx] = new_hi
        if stalled.all():
            break
    else:
        bad = int(np.nonzero((hi - lo) > atol)[0][0])
        raise EigenSolverError(
            f"bisection did not converge after {MAX_SWEEPS} sweeps (eigenvalue index {bad})",
            index=bad,
        )
    return 0.5 * (lo + hi), scale


def _gttrf(dl, d, du):
    """Pivoted LU of tridiagonal matrices, one per column (LAPACK ``gttrf`` layout)."""
    n = d.shape[0]
    dl, d, du = dl.copy(), d.copy(), du.copy()
    du2 = np.zeros((max(n - 2, 0),) + d.shape[1:])
    piv = np.zeros((max(n - 1, 0),) + d.shape[1:], dtype=bool)
    for i in range(n - 1):
        swap = np.abs(d[i]) < np.abs(dl[i])
        safe_d = np.where(d[i] == 0.0, 1.0, d[i])
        safe_l = np.where(dl[i] == 0.0, 1.0, dl[i])
        f_keep = dl[i] / safe_d
        f_swap = d[i] / safe_l
        fact = np.where(swap, f_swap, f_keep)
        d_i = np.where(swap, dl[i], d[i])
        du_i = np.where(swap, d[i + 1], du[i])
        d_next = np.where(swap, du[i] - fact * d[i + 1], d[i + 1] - fact * du[i])
        if i < n - 2:
            du2[i] = np.where(swap, du[i + 1], 0.0)
            du[i + 1] = np.where(swap, -fact * du[i + 1], du[i + 1])
        d[i] = d_i
        du[i] = du_i
        d[i + 1] = d_next
        dl[i] = fact
        piv[i] = swap
    return dl, d, du, du2, piv


def _gttrs(lu, b):
    dl, d, du, du2, piv = lu
    n = d.shape[0]
    b = b.copy()
    for i in range(n - 1):
        bi = b[i].copy()
        bn = b[i + 1]
        b[i] = np.where(piv[i], bn, bi)
        b[i + 1] = np.where(piv[i], bi - dl[i] * bn, bn - dl[i] * bi)
    b[n - 1] = b[n - 1] / d[n - 1]
    if n > 1:
        b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2]
    for i in range(n - 3, -1, -1):
        b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / d[i]
    return b


def _tridiag_apply(d, e, v):
    out = d[:, None] * v
    out[:-1] += e[:, None] * v[1:]
    out[1:] += e[:, None] * v[:-1]
    return out


def _fix_sign(v):
    """Flip columns so the first non-negligible component is positive."""
    for k in range(v.shape[1]):
        col = v[:, k]
        big = np.nonzero(np.abs(col) > 1e-8 * np.max(np.abs(col)))[0]
        if big.size and col[big[0]] < 0:
            v[:, k] = -col
    return v


def eigen_symmetric_tridiagonal(diag, offdiag, K: int):
    """``K`` smallest eigenpairs of a real symmetric tridiagonal matrix.

    Eigenvalues are bracketed by Sturm-count multisection to
    ``1e-12`` times the Gershgorin bound.  Eigenvectors come from
    inverse iteration with a pivoted tridiagonal LU, and the returned
    eigenvalues are their Rayleigh quotients.  Deterministic: the start
    vectors come from a fixed seed.

    Parameters
    ----------
    diag : (n,) array
    offdiag : (n-1,) array
    K : int
        Number of eigenpairs, ``1 <= K <= n``.

    Returns
    -------
    values : (K,) array, ascending
    vectors : (n, K) array, unit 2-norm columns, first non-negligible entry positive

    Raises
    ------
    EigenSolverError
        If bisection or inverse iteration exceeds its iteration cap.
    """
    d = np.asarray(diag, dtype=float)
    e = np.asarray(offdiag, dtype=float)
    n = d.size
    if d.ndim != 1 or e.shape != (max(n - 1, 0),):
        raise ValueError("offdiag must have length len(diag) - 1")
    if not 1 <= K <= n:
        raise ValueError(f"K must be in [1, {n}], got {K}")
    if n == 1:
        return d.copy(), np.ones((1, 1))

    lam, scale = _bisect(d, e, K, EIG_TOL)

    # split-off zero couplings make exact eigenvectors; keep e tiny-nonzero free
    rng = np.random.default_rng(12345)
    v = rng.standard_normal((n, K))
    v /= np.linalg.norm(v, axis=0)
    eps = np.finfo(float).eps
    # shift just off the eigenvalue so the factorization is never exactly singular
    sigma = lam + eps * scale * np.where(lam >= 0, 1.0, -1.0)
    dl = np.repeat(e[:, None], K, axis=1)
    dd = d[:, None] - sigma[None, :]
    lu = _gttrf(dl, dd, dl.copy())
    bad_pivot = lu[1] == 0.0
    if bad_pivot.any():
        lu[1][bad_pivot] = eps * scale
    tol = 1e-10 * scale
    clusters = _clusters(lam, 1e-3 * scale)
    for it in range(_MAX_INVERSE_ITERATIONS):
        y = _gttrs(lu, v)
        for group in clusters:
            y[:, group] = _mgs(y[:, group])
        v = y / np.linalg.norm(y, axis=0)
        rq = np.einsum("ik,ik->k", v, _tridiag_apply(d, e, v))
        res = np.linalg.norm(_tridiag_apply(d, e, v) - v * rq, axis=0)
        if it >= 1 and np.all(res <= tol):
            break
    else:
        bad = int(np.argmax(res > tol))
        raise EigenSolverError(
            f"inverse iteration did not converge (eigenvalue index {bad}, "
            f"residual {res[bad]:.3e})",
            index=bad,
        )
    order = np.argsort(rq, kind="stable")
    return rq[order], _fix_sign(v[:, order])


def _clusters(lam, gap):
    groups, cur = [], [0]
    for k in range(1, lam.size):
        if lam[k] - lam[k - 1] < gap:
            cur.append(k)
        else:
            groups.append(cur)
            cur = [k]
    groups.append(cur)
    return [g for g in groups if len(g) > 1]


def _mgs(y):
    y = y.copy()
    for j in range(y.shape[1]):
        for i in range(j):
            y[:, j] -= (y[:, i] @ y[:, j]) / (y[:, i] @ y[:, i]) * y[:, i]
    return y


@dataclass
class EigenSolution:
    """Lowest eigenpairs of a discretized well Hamiltonian.

    ``states[k]`` are physical wave functions sampled at every node of
    ``grid`` and normalized to one by Simpson quadrature in ``x``.
    """

    energies: np.ndarray
    states: list
    grid: Grid
    richardson_estimate: np.ndarray | None = None
    convergence_order: float = math.nan
    orders: np.ndarray | None = field(default=None, repr=False)

    @property
    def params(self) -> PhysicalParams:
        return self.grid.params


def _check_sizes(N, K):
    if N < 64:
        raise ValueError(f"need N >= 64 grid points, got {N}")
    if not 1 <= K <= N / 4:
        raise ValueError(f"need 1 <= K <= N/4, got K={K}, N={N}")


def _solve_on(grid: Grid, params: PhysicalParams, K: int) -> EigenSolution:
    H = build_hamiltonian(grid, params)
    d = H.band(0).real
    e = H.band(1).real
    _, vecs = eigen_symmetric_tridiagonal(d, e, K)
    energies = kinetic_rayleigh_quotient(grid, params, vecs)
    states = []
    for k in range(K):
        full = np.zeros(grid.size)
        full[1:-1] = vecs[:, k]
        if grid.coordinate is Coordinate.deformed_s:
            # chi -> phi = chi / sqrt(1 + gamma x)
            full = full / np.sqrt(grid.jacobian())
        states.append(WaveFunction(full, grid).normalized())
    return EigenSolution(np.asarray(energies, dtype=float), states, grid)


def solve_well(params: PhysicalParams, N: int, K: int) -> EigenSolution:
    """Lowest ``K`` eigenpairs on an ``N``-point uniform grid in ``s``."""
    _check_sizes(N, K)
    return _solve_on(make_grid(params, N, "deformed_s"), params, K)


def solve_well_xgrid(params: PhysicalParams, N: int, K: int) -> EigenSolution:
    """Lowest ``K`` eigenpairs from the ``Q^H Q / 2m`` matrix on an ``N``-point ``x`` grid."""
    _check_sizes(N, K)
    return _solve_on(make_grid(params, N, "physical_x"), params, K)


class Refinement(NamedTuple):
    energies: np.ndarray
    order: np.ndarray | None


def richardson_refine(coarse: EigenSolution, fine: EigenSolution, exact=None) -> Refinement:
    """Extrapolate ``(4 E_fine - E_coarse) / 3`` assuming O(h^2) errors.

    ``fine`` must have twice as many grid intervals as ``coarse`` on the
    same parameters and coordinate.  When ``exact`` energies are supplied,
    the empirical order ``log2((E_c - E) / (E_f - E))`` is returned too.
    """
    cg, fg = coarse.grid, fine.grid
    if cg.coordinate is not fg.coordinate or cg.params != fg.params:
        raise ValueError("coarse and fine solutions use different grids or parameters")
    if fg.size - 1 != 2 * (cg.size - 1):
        raise ValueError(
            f"fine grid must have twice the intervals of the coarse grid "
            f"({fg.size - 1} vs {cg.size - 1})"
        )
    k = min(coarse.energies.size, fine.energies.size)
    ec, ef = coarse.energies[:k], fine.energies[:k]
    refined = (4.0 * ef - ec) / 3.0
    order = None
    if exact is not None:
        ex = np.asarray(exact, dtype=float)[:k]
        with np.errstate(divide="ignore", invalid="ignore"):
            order = np.log2((ec - ex) / (ef - ex))
    return Refinement(refined, order)


def solve_well_refined(params: PhysicalParams, N: int, K: int, xgrid: bool = False) -> EigenSolution:
    """Solve at ``N`` and ``(N+1)/2`` points, attach the Richardson estimate.

    If a further halved grid is admissible, the observed order
    ``log2((E_q - E_c) / (E_c - E_f))`` from three levels is stored as
    ``orders`` and its median as ``convergence_order``.
    """
    if (N - 1) % 2:
        raise ValueError("N - 1 must be even for a grid-halving refinement")
    solver = solve_well_xgrid if xgrid else solve_well
    Nc = (N - 1) // 2 + 1
    fine = solver(params, N, K)
    coarse = solver(params, Nc, K)
    fine.richardson_estimate = richardson_refine(coarse, fine).energies
    Nq = (Nc - 1) // 2 + 1
    if (Nc - 1) % 2 == 0 and Nq % 2 == 1 and Nq >= 64 and K <= Nq / 4:
        quarter = solver(params, Nq, K)
        with np.errstate(divide="ignore", invalid="ignore"):
            orders = np.log2(
                (quarter.energies - coarse.energies) / (coarse.energies - fine.energies)
            )
        fine.orders = orders
        fine.convergence_order = float(np.median(orders))
    return fine
