"""Hermitian position-dependent-momentum quantum mechanics on a deformed line.

Deformed translation algebra, Hermitian momentum and Hamiltonian
discretizations, closed-form infinite-well solutions and an in-repo
tridiagonal eigensolver used to cross-check them.
"""

from pdmwell.deformed_algebra import (
    Deformation,
    deformed_add,
    deformed_coordinate,
    deformed_inverse,
    inverse_deformed_coordinate,
    point_translate,
    q_exp,
)
from pdmwell.grid import Grid, PhysicalParams, make_grid
from pdmwell.operators import (
    OperatorMatrix,
    apply_D_gamma,
    build_hamiltonian,
    build_hamiltonian_nonhermitian,
    build_momentum_hermitian,
    build_momentum_nonhermitian,
    build_vonroos_kinetic,
    effective_mass,
    hermiticity_defect,
)
from pdmwell.analytic_well import (
    WellSolution,
    eigenfunction,
    energy,
    energy_bound,
    general_solution,
    hermitian_eigenfunction,
    hermitian_energy,
    normalization_sq,
    ode_coefficients,
    reference_energy_ref3,
    wavenumber_sq,
    well_solution,
)
from pdmwell.observables import (
    Density2D,
    WaveFunction,
    density_2d,
    expectation_p_gamma,
    expectation_x,
    expectation_x_quadrature,
    integrate,
)
from pdmwell.numeric_solver import (
    EigenSolution,
    eigen_symmetric_tridiagonal,
    richardson_refine,
    solve_well,
    solve_well_refined,
    solve_well_xgrid,
)
from pdmwell.evolution import PropagationRun, propagate

__version__ = "0.1.0"
