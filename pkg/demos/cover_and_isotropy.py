"""The double cover SU(2) -> SO(3) and the circle subgroups used later.

Quaternions (w, x, y, z) stand for w*I + sigma(x, y, z).  The cover sends
a and -a to the same rotation, and mu_n(theta) turns the x axis by 2 n theta.
"""

import math

import numpy as np

from homconn import SU2Element, covering_rho, hat, mu_n, rho_star, sample_array, x_rotation

np.set_printoptions(precision=4, suppress=True)

q = SU2Element(tuple(sample_array("unit_quaternion", 3, 1)[0]))
print("rho(a):\n", covering_rho(q))
print("rho(-a) == rho(a):", np.array_equal(covering_rho(-q), covering_rho(q)))

for n in (-2, 1, 3):
    th = 0.3
    err = np.abs(covering_rho(mu_n(n, th)) - x_rotation(2 * n * th)).max()
    print(f"n={n:+d}: |rho(mu_n) - R(2 n theta)| = {err:.1e}")

print("mu_1(pi) as a 2x2 matrix:\n", mu_n(1, math.pi).matrix().real)

u = np.array([0.2, -1.0, 0.5])
print("rho_*(u) + 2 hat(u) =", np.abs(rho_star(u) + 2 * hat(u)).max())
