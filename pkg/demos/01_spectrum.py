"""Bound-state spectrum of the deformed infinite well.

Solves the discretized Hamiltonian on the deformed coordinate, applies one
Richardson step and sets the result beside the two closed forms: the
unshifted spectrum ``n^2 pi^2 hbar^2 gamma^2 / 2m ln^2(1 + gamma L)`` and the
same spectrum raised by ``3 hbar^2 gamma^2 / 8m``.
"""

import numpy as np

from pdmwell import PhysicalParams, energy, reference_energy_ref3, solve_well_refined

for gamma_tilde in (-0.5, 0.5, 1.0, 5.0):
    p = PhysicalParams.from_gamma_tilde(gamma_tilde)
    sol = solve_well_refined(p, 8001, 4)
    print(f"gamma L = {gamma_tilde:+.1f}   observed order {sol.convergence_order:.3f}")
    print("   n      numeric        unshifted       shifted")
    for n, e in enumerate(sol.richardson_estimate, start=1):
        print(f"  {n:2d}  {e:14.9f}  {reference_energy_ref3(n, p):14.9f}  {energy(n, p):14.9f}")

# the numeric levels follow the unshifted form to about 1e-12
p = PhysicalParams.from_gamma_tilde(1.0)
est = solve_well_refined(p, 8001, 10).richardson_estimate
exact = np.array([reference_energy_ref3(n, p) for n in range(1, 11)])
print("max relative deviation from the unshifted form:", np.max(np.abs(est / exact - 1)))
