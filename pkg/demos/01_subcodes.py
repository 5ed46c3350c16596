"""
Maximally recoverable subcodes by hand
======================================

A [9, 3] binary code made of three repetition blocks, and a 2-dimensional
subcode that keeps full rank on every pair of coordinates where the big
code does.
"""

import numpy as np

from sparse_update import LinearCode, is_mrsc, enumerate_k_cores, make_field
from sparse_update.mrsc import construct_linearized_mrsc, construct_random_mrsc

F2 = make_field(2)
C0 = LinearCode.from_rows(F2, [[1, 1, 1, 0, 0, 0, 0, 0, 0],
                               [0, 0, 0, 1, 1, 1, 0, 0, 0],
                               [0, 0, 0, 0, 0, 0, 1, 1, 1]])
C = LinearCode.from_rows(F2, [[1, 1, 1, 0, 0, 0, 1, 1, 1],
                              [0, 0, 0, 1, 1, 1, 1, 1, 1]])

# The four equivalent tests all agree
verdict = is_mrsc(C, C0, "all")
print("is MRSC:", verdict.is_mrsc, verdict.per_mode)

# Pick a subcode that forgets the third block and the check finds the hole
Cp = LinearCode.from_rows(F2, [[1, 1, 1, 0, 0, 0, 0, 0, 0],
                               [0, 0, 0, 1, 1, 1, 0, 0, 0]])
bad = is_mrsc(Cp, C0)
print("forgetful subcode:", bad.is_mrsc, "witness", bad.witness.indices)

# 3-cores of the dual: one coordinate from each block
cores = list(enumerate_k_cores(C0, 3))
print(len(cores), "three-cores, e.g.", [S.indices for S in cores[:3]])

# Random search over GF(2) works here; the Moore construction needs GF(8)
R = construct_random_mrsc(C0, 2, seed=1)
print("random subcode rows:\n", np.array(R.generator.tolist()))
L = construct_linearized_mrsc(C0, 2)
print("linearized subcode over", L.field, "\n", np.array(L.generator.tolist()))
