"""Finite-difference matrices for the deformed momentum and Hamiltonian.

All matrices act on the interior nodes of a :class:`~pdmwell.grid.Grid`; the
wall values are zero (Dirichlet) and their rows and columns are dropped.

On a ``physical_x`` grid the Hermitian momentum is discretized through the
factorization ``p = -i hbar sqrt(f) d/dx sqrt(f)`` with ``f = 1 + gamma x``,
which expands to ``-i hbar (f d/dx + gamma/2)``.  Centered differences of the
factorized form give a matrix that is Hermitian entry by entry.

On a ``deformed_s`` grid the matrices act on ``chi = sqrt(f) phi``.  That map
is unitary from ``L2(dx)`` to ``L2(ds)`` and turns ``D_gamma`` into a plain
``d/ds``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from pdmwell.grid import Coordinate, Grid, PhysicalParams, WaveFunction

__all__ = [
    "OperatorMatrix",
    "build_momentum_hermitian",
    "build_momentum_nonhermitian",
    "apply_D_gamma",
    "build_hamiltonian",
    "build_hamiltonian_nonhermitian",
    "momentum_halfstep",
    "kinetic_rayleigh_quotient",
    "build_vonroos_kinetic",
    "effective_mass",
    "hermiticity_defect",
]


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """Sparse square matrix of an operator on the interior nodes of ``grid``."""

    entries: sp.csr_array
    grid: Grid

    def __post_init__(self):
        n = self.grid.n_interior
        if self.entries.shape != (n, n):
            raise ValueError(
                f"operator shape {self.entries.shape} != interior size ({n}, {n})"
            )

    @property
    def shape(self):
        return self.entries.shape

    def toarray(self) -> np.ndarray:
        return self.entries.toarray()

    def norm(self) -> float:
        """Largest entry modulus."""
        return float(abs(self.entries).max())

    def __matmul__(self, v):
        return self.entries @ v

    def band(self, offset: int) -> np.ndarray:
        return self.entries.diagonal(offset)


def _check_same_grid(grid: Grid, params: PhysicalParams):
    if grid.params != params:
        raise ValueError("grid was built for different physical parameters")


def _interior_n(grid: Grid) -> int:
    n = grid.n_interior
    if n < 2:
        raise ValueError("grid needs at least two interior points")
    return n


def _tridiag(lower, diag, upper, dtype) -> sp.csr_array:
    n = diag.size
    m = sp.diags_array([lower, diag, upper], offsets=[-1, 0, 1], shape=(n, n), dtype=dtype)
    return sp.csr_array(m)


def _root_f(grid: Grid) -> np.ndarray:
    """``sqrt(1 + gamma x)`` at all nodes of a physical grid."""
    return np.sqrt(1.0 + grid.params.gamma * grid.points)


def build_momentum_hermitian(grid: Grid, params: PhysicalParams) -> OperatorMatrix:
    """Hermitian deformed momentum ``-i hbar ((1 + gamma x) d/dx + gamma/2)``.

    The matrix has zero diagonal and off-diagonals
    ``-/+ i hbar sqrt(f_j f_k) / (2h)``, so it equals its conjugate
    transpose exactly in floating point.
    """
    _check_same_grid(grid, params)
    n = _interior_n(grid)
    h = grid.spacing
    if grid.coordinate is Coordinate.physical_x:
        w = _root_f(grid)
        prod = w[1:-2] * w[2:-1]
    else:
        prod = np.ones(n - 1)
    upper = -1j * params.hbar * prod / (2.0 * h)
    lower = np.conj(upper)
    return OperatorMatrix(_tridiag(lower, np.zeros(n, complex), upper, complex), grid)


def build_momentum_nonhermitian(grid: Grid, params: PhysicalParams) -> OperatorMatrix:
    """Undeformed-constant momentum ``-i hbar (1 + gamma x) d/dx``.

    Built in constant-offset form, the Hermitian matrix plus
    ``i hbar gamma / 2`` on the diagonal, which is an O(h^2) consistent
    discretization of the same differential operator.  Its anti-Hermitian
    part is exactly ``i hbar gamma`` times the identity.
    """
    P = build_momentum_hermitian(grid, params)
    n = grid.n_interior
    shift = sp.eye_array(n, dtype=complex, format="csr") * (0.5j * params.hbar * params.gamma)
    return OperatorMatrix(sp.csr_array(P.entries + shift), grid)


def apply_D_gamma(psi: WaveFunction, params: PhysicalParams) -> WaveFunction:
    """Apply ``D_gamma = (1 + gamma x) d/dx + gamma/2`` to samples on an x-grid.

    Interior nodes use the same symmetrized stencil as
    :func:`build_momentum_hermitian` (with the supplied wall values, so the
    input need not vanish at the walls).  The two wall nodes use one-sided
    second-order differences.
    """
    grid = psi.grid
    _check_same_grid(grid, params)
    if grid.coordinate is not Coordinate.physical_x:
        raise ValueError("apply_D_gamma expects samples on a physical_x grid")
    if grid.size < 3:
        raise ValueError("need at least 3 grid points")
    h = grid.spacing
    w = _root_f(grid)
    g = w * psi.samples
    dg = np.empty_like(g)
    dg[1:-1] = (g[2:] - g[:-2]) / (2.0 * h)
    dg[0] = (-3.0 * g[0] + 4.0 * g[1] - g[2]) / (2.0 * h)
    dg[-1] = (3.0 * g[-1] - 4.0 * g[-2] + g[-3]) / (2.0 * h)
    return WaveFunction(w * dg, grid)


def _interior_potential(grid: Grid, V) -> np.ndarray:
    n = grid.n_interior
    if V is None:
        return np.zeros(n)
    V = np.asarray(V)
    if np.iscomplexobj(V):
        if np.any(V.imag != 0):
            raise ValueError("potential must be real")
        V = V.real
    V = V.astype(float)
    if V.ndim == 0:
        return np.full(n, float(V))
    if V.shape == (grid.size,):
        return V[1:-1]
    if V.shape == (n,):
        return V
    raise ValueError(f"potential has shape {V.shape}; expected ({grid.size},) or ({n},)")


def momentum_halfstep(grid: Grid, params: PhysicalParams) -> sp.csr_array:
    """Rectangular ``(n+1) x n`` momentum from interior nodes to cell midpoints.

    ``(Q psi)_{j+1/2} = -i hbar sqrt(f_{j+1/2}) (sqrt(f_{j+1}) psi_{j+1} - sqrt(f_j) psi_j) / h``
    with zero wall values.  ``Q^H Q / 2m`` is the kinetic part of
    :func:`build_hamiltonian`.
    """
    _check_same_grid(grid, params)
    n = _interior_n(grid)
    h = grid.spacing
    if grid.coordinate is Coordinate.physical_x:
        w = _root_f(grid)[1:-1]
        rmid = np.sqrt(1.0 + params.gamma * grid.midpoints)
    else:
        w = np.ones(n)
        rmid = np.ones(n + 1)
    scale = -1j * params.hbar / h
    # row j+1/2 touches interior nodes j (minus) and j+1 (plus)
    plus = scale * rmid[:-1] * w
    minus = -scale * rmid[1:] * w
    rows = np.concatenate([np.arange(n), np.arange(1, n + 1)])
    cols = np.concatenate([np.arange(n), np.arange(n)])
    vals = np.concatenate([plus, minus])
    return sp.csr_array((vals, (rows, cols)), shape=(n + 1, n))


def kinetic_rayleigh_quotient(grid: Grid, params: PhysicalParams, v: np.ndarray) -> np.ndarray:
    """``|Q v|^2 / (2m |v|^2)`` for each column of ``v`` (interior samples).

    Summing squared differences avoids the ``eps * |H|`` cancellation of
    ``v . H v`` and resolves small eigenvalues to near full precision.
    """
    Q = momentum_halfstep(grid, params)
    v = np.asarray(v)
    qv = Q @ v
    num = np.sum(np.abs(qv) ** 2, axis=0)
    den = np.sum(np.abs(v) ** 2, axis=0)
    return num / (2.0 * params.mass * den)


def build_hamiltonian(grid: Grid, params: PhysicalParams, V=None) -> OperatorMatrix:
    """Hermitian Hamiltonian ``p_gamma^2 / 2m + V``.

    The kinetic part is ``Q^H Q / 2m`` with ``Q`` the half-step momentum
    ``-i hbar sqrt(f) d/dx sqrt(f)`` that maps node values to cell
    midpoints.  This keeps the matrix tridiagonal, real symmetric and
    positive definite, and avoids the odd/even decoupled null modes of the
    squared centered momentum.  ``V`` is sampled at the nodes (length
    ``grid.size`` or ``grid.n_interior``, or a scalar).
    """
    _check_same_grid(grid, params)
    n = _interior_n(grid)
    h = grid.spacing
    c = params.hbar**2 / (2.0 * params.mass * h * h)
    Vi = _interior_potential(grid, V)
    if grid.coordinate is Coordinate.physical_x:
        w = _root_f(grid)
        fmid = 1.0 + params.gamma * grid.midpoints
        diag = c * w[1:-1] ** 2 * (fmid[1:] + fmid[:-1]) + Vi
        off = -c * (w[1:-2] * w[2:-1]) * fmid[1:-1]
    else:
        diag = np.full(n, 2.0 * c) + Vi
        off = np.full(n - 1, -c)
    return OperatorMatrix(_tridiag(off, diag, off, float).astype(complex), grid)


def build_hamiltonian_nonhermitian(grid: Grid, params: PhysicalParams, V=None) -> OperatorMatrix:
    """``p^2 / 2m + V`` with the non-Hermitian momentum ``-i hbar (1 + gamma x) d/dx``.

    Uses ``p_nh = p_h + i hbar gamma / 2``, so
    ``p_nh^2 = p_h^2 + i hbar gamma p_h - hbar^2 gamma^2 / 4``.  The Hermitian
    part is the matrix of :func:`build_hamiltonian`; the anti-Hermitian part
    is ``i hbar gamma / 2m`` times the Hermitian momentum matrix.
    """
    H = build_hamiltonian(grid, params, V)
    P = build_momentum_hermitian(grid, params)
    n = grid.n_interior
    g, hb, m = params.gamma, params.hbar, params.mass
    extra = P.entries * (1j * hb * g / (2.0 * m)) - sp.eye_array(n, format="csr") * (
        hb * hb * g * g / (8.0 * m)
    )
    return OperatorMatrix(sp.csr_array(H.entries + extra), grid)


def effective_mass(x, params: PhysicalParams):
    """Position-dependent mass ``m / (1 + gamma x)^2``."""
    xa = np.asarray(x, dtype=float)
    f = 1.0 + params.gamma * xa
    if np.any(f <= 0.0):
        raise ValueError("effective_mass requires 1 + gamma*x > 0")
    m = params.mass / f**2
    return m if xa.ndim else float(m)


def build_vonroos_kinetic(
    grid: Grid,
    params: PhysicalParams,
    alpha: float,
    beta: float,
    gamma_order: float,
) -> OperatorMatrix:
    """Symmetrized von Roos kinetic operator for the mass ``m / (1 + gamma x)^2``.

    ``T = (m^a p m^b p m^c + m^c p m^b p m^a) / 4`` with ``a + b + c = -1``,
    ``p = -i hbar d/dx`` by centered differences and the mass powers as
    diagonal matrices sampled at the nodes.  The intermediate ``m^b p m^c psi``
    is also needed on the walls.  There the centered difference uses a
    cubic-extrapolated ghost value, so its error keeps the interior form
    ``h^2 u'''/6`` and the operator stays O(h^2) up to the boundary.  The
    matrix is not exactly Hermitian.
    """
    if abs(alpha + beta + gamma_order + 1.0) > 1e-12:
        raise ValueError(
            f"ordering parameters must sum to -1, got {alpha + beta + gamma_order!r}"
        )
    _check_same_grid(grid, params)
    if grid.coordinate is not Coordinate.physical_x:
        raise ValueError("von Roos operator is defined on a physical_x grid")
    n = _interior_n(grid)
    if n < 3:
        raise ValueError("von Roos operator needs at least 3 interior points")
    h = grid.spacing
    me_all = effective_mass(grid.points, params)
    me = me_all[1:-1]
    A = sp.diags_array(me**alpha)
    B = sp.diags_array(me_all**beta)
    C = sp.diags_array(me**gamma_order)
    r = 1.0 / (2.0 * h)
    # inner derivative, interior nodes -> all nodes (row k is node k)
    G = sp.lil_array((n + 2, n))
    for k in range(1, n + 1):
        if k >= 2:
            G[k, k - 2] = -r
        if k <= n - 1:
            G[k, k] = r
    # ghost u_{-1} = 4u_0 - 6u_1 + 4u_2 - u_3 with u_0 = 0
    G[0, 0], G[0, 1], G[0, 2] = 7.0 * r, -4.0 * r, r
    G[n + 1, n - 1], G[n + 1, n - 2], G[n + 1, n - 3] = -7.0 * r, 4.0 * r, -r
    G = sp.csr_array(G)
    # outer derivative: all nodes -> interior nodes
    Dout = sp.diags_array([-r * np.ones(n), r * np.ones(n)], offsets=[0, 2], shape=(n, n + 2))
    # p m^b p = -hbar^2 Dout m^b G
    inner = Dout @ B @ G
    T = -(params.hbar**2) / 4.0 * (A @ inner @ C + C @ inner @ A)
    return OperatorMatrix(sp.csr_array(T).astype(complex), grid)


def hermiticity_defect(M) -> float:
    """Largest entry modulus of ``M - M^H``."""
    if isinstance(M, OperatorMatrix):
        M = M.entries
    if sp.issparse(M):
        diff = M - M.conj().T
        return float(abs(diff).max()) if diff.nnz else 0.0
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError("hermiticity_defect needs a square matrix")
    return float(np.max(np.abs(M - M.conj().T))) if M.size else 0.0
