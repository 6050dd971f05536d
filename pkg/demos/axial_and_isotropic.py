"""Reduced moduli once a circle or all of SO(3) fixes a point.

With circle isotropy a connection is diag(a) plus b I + c J on the (y, z)
plane.  The leftover SO(2) gauge turns (b, c), so only a and r = |(b, c)|
remain.  With full SO(3) isotropy only multiples of the identity survive.
"""

import numpy as np

from homconn import (
    NotEquivariant,
    axial_canonical,
    axial_coefficients,
    axial_gauge,
    axial_matrix,
    axial_su2_modulus,
    iso_modulus,
)

lam = axial_matrix(1.5, 3.0, 4.0)
for theta in (0.0, 0.7, 2.5):
    moved = axial_gauge(theta, lam)
    print(f"theta={theta}: coefficients {np.round(axial_coefficients(moved), 4)}, modulus {axial_canonical(*axial_coefficients(moved))}")

print(axial_su2_modulus(2, np.diag([-3.0, 0.0, 0.0])))

col = np.zeros((3, 3))
col[:, 0] = [3.0, 4.0, 0.0]
print("trivial lift, first column (3,4,0):", axial_su2_modulus(0, col))

print("isotropic 2I:", iso_modulus(2 * np.eye(3)))
try:
    iso_modulus(np.diag([1.0, 2.0, 3.0]))
except NotEquivariant as exc:
    print("diag(1,2,3) rejected, residual", round(exc.residual, 3))
