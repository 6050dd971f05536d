"""Walk through the trivial-isotropy case.

A connection is a 3x3 matrix M, and rotations act by left multiplication.
The canonical form keeps sqrt(M^T M) plus the sign of det M, and the chart
flattens that into a traceless symmetric A and one real number lambda.
"""

import numpy as np

from homconn import (
    ChartPoint,
    bianchi_canonical,
    bianchi_chart,
    bianchi_chart_inv,
    bianchi_equiv,
    classify_stratum,
    sample_array,
)

np.set_printoptions(precision=4, suppress=True)

m = np.array([[2.0, 1.0, 0.0], [0.0, 1.0, -1.0], [1.0, 0.0, 3.0]])
r = sample_array("rotation", 1, 1)[0]

c1, c2 = bianchi_canonical(m), bianchi_canonical(r @ m)
print("sign:", c1.sign, c2.sign)
print("P from M:\n", c1.p_psd)
print("P from R M:\n", c2.p_psd)

p = bianchi_chart(c1)
print("chart A:\n", p.a, "\nlambda:", p.lam)

back = bianchi_chart_inv(p)
print("round trip error:", np.abs(back.p_psd - c1.p_psd).max())

# rank-deficient matrices sit on the boundary where P and -P are glued
d = np.diag([2.0, 0.0, 0.0])
print("diag(2,0,0) ~ -diag(2,0,0):", bianchi_equiv(d, -d))
print("I ~ -I:", bianchi_equiv(np.eye(3), -np.eye(3)))

for a, lam in [
    (np.zeros((3, 3)), 0.0),
    (np.diag([-1.0, -1.0, 2.0]), 0.0),
    (np.diag([1.0, 1.0, -2.0]), 0.0),
    (np.diag([-1.0, 0.0, 1.0]), 0.5),
]:
    s = classify_stratum(ChartPoint(a, lam))
    rank = np.linalg.matrix_rank(bianchi_chart_inv(ChartPoint(a, lam)).p_psd)
    print(f"eig(A)={np.diag(a)} lambda={lam}: stratum {s.index}, rank of P {rank}")
