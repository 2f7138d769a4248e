"""Position and momentum expectations and the two-dimensional density.

A positive deformation pulls the particle towards the origin: ``<x>`` drops
below ``L/2`` and the peak of the separable 2-D density moves into the
lower-left quadrant.
"""

import numpy as np

from pdmwell import PhysicalParams, density_2d, expectation_p_gamma, expectation_x, expectation_x_quadrature

print(" gamma L    <x>_1/L    <x>_20/L   quadrature check")
for g in np.linspace(0.0, 1.0, 6):
    p = PhysicalParams(gamma=float(g))
    x1, x20 = expectation_x(1, p), expectation_x(20, p)
    check = abs(expectation_x_quadrature(1, p, 8001) / x1 - 1)
    print(f"  {g:4.1f}    {x1:.6f}   {x20:.6f}   {check:.1e}")

p = PhysicalParams(gamma=1.0)
print("<p_gamma> for n = 1..5:", [f"{abs(expectation_p_gamma(n, p)):.1e}" for n in range(1, 6)])

dens = density_2d(1, 1, p, 513)
print("2-D density integral:", dens.total())
print("2-D density maximum at (x, y) =", dens.argmax())
