"""Which linear maps survive the isotropy constraint.

For each isotropy group H and each way of lifting it into the structure
group, solve Lambda lam(h) = Ad(h) Lambda and print the dimension of the
solution space together with a basis.
"""

import numpy as np

from homconn import AXIAL_PLUS, ISOTROPIC, METRIC, dimension_table, solve_equivariant_basis, su2_lift

np.set_printoptions(precision=4, suppress=True)

for key, dim in dimension_table().items():
    print(f"{key[0]:10s} {key[1]:8s} dim {dim}")

for iso, lift in [(AXIAL_PLUS, METRIC), (AXIAL_PLUS, su2_lift(2)), (AXIAL_PLUS, su2_lift(0)), (ISOTROPIC, METRIC)]:
    b = solve_equivariant_basis(iso, lift)
    print(f"\n{iso} / {lift}: {b.dimension} basis matrices")
    for m in b.basis:
        print(m)
