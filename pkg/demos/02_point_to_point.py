"""
Updating one storage node
=========================

A node stores ``A x`` for a striped code with four stripes.  A handful of
symbols of x change.  The source sends two symbols instead of four.
"""

import numpy as np

from sparse_update import build_p2p_scheme, build_striped_matrix, field_of_order
from sparse_update.linalg import FieldMatrix
from sparse_update.update import find_counterexample, p2p_decode, p2p_encode, random_sparse

F = field_of_order(8)
A = build_striped_matrix([1, 1, 1], 4, F)
scheme = build_p2p_scheme(A, eps=1)
print("method:", scheme.method, " cost:", scheme.cost, " bound:", scheme.bound)
print("H =\n", np.array(scheme.H.tolist()))

rng = np.random.default_rng(0)
x = rng.integers(0, 8, size=12)
e = random_sparse(12, 1, F, rng, exact=True)
x_new = F.vadd(x, e)

# The node only knows A x; it receives H x_new
y = p2p_encode(scheme, x_new)
recovered = p2p_decode(scheme, y, A @ x)
print("update at", np.flatnonzero(e), "->", recovered, "expected", A @ x_new)

# One symbol is not enough, and here is a pair of updates that proves it
H1 = FieldMatrix(F, scheme.H.data[:1])
pair = find_counterexample(H1, A, 1)
print("with one row: confusable pair found =", pair.valid)
print("  e1 =", pair.e1, "\n  e2 =", pair.e2)
