"""Crank-Nicolson propagation with the Hermitian and non-Hermitian Hamiltonians.

The Hermitian ordering conserves the norm to rounding.  The non-Hermitian
ordering, built from the plain deformed momentum, lets it drift.
"""

import numpy as np

from pdmwell import PhysicalParams, build_hamiltonian, build_hamiltonian_nonhermitian, make_grid, propagate
from pdmwell.analytic_well import hermitian_eigenfunction
from pdmwell.grid import WaveFunction

p = PhysicalParams(gamma=1.0)
grid = make_grid(p, 201)
# equal superposition of the two lowest levels
psi = WaveFunction(hermitian_eigenfunction(1, grid.points, p) + hermitian_eigenfunction(2, grid.points, p), grid)

for label, builder in (("hermitian", build_hamiltonian), ("non-hermitian", build_hamiltonian_nonhermitian)):
    run = propagate(psi, builder(grid, p), dt=1e-3, steps=2000)
    print(f"{label:>14}: max |norm - 1| = {run.max_norm_drift:.2e}, "
          f"<x> range [{run.x_history.min():.4f}, {run.x_history.max():.4f}], "
          f"energy spread {np.ptp(run.energy_history):.2e}")
