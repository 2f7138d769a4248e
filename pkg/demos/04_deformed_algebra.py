"""Deformed sum, q-exponential and the deformed coordinate.

The deformed sum ``a + b + gamma a b`` turns the q-exponential into a
homomorphism, and the coordinate ``ln(1 + gamma x) / gamma`` makes the
deformed translation an ordinary shift.
"""

import numpy as np

from pdmwell.deformed_algebra import deformed_add, deformed_coordinate, inverse_deformed_coordinate, q_exp

gamma = 0.7
q = 1.0 - gamma  # the deformation parameter is 1 - q
a, b = 0.3, 1.1
print("a (+) b =", deformed_add(a, b, gamma))
print("e_q(a) e_q(b) =", q_exp(a, q) * q_exp(b, q), "  e_q(a (+) b) =", q_exp(deformed_add(a, b, gamma), q))

x = np.linspace(0.0, 1.0, 5)
s = deformed_coordinate(x, gamma)
print("x        :", x)
print("s(x)     :", np.round(s, 6))
print("x(s(x))  :", inverse_deformed_coordinate(s, gamma))
