"""Ordinary matrices seen through discriminants.

c_s(a) is the alternating contraction of s copies of a with s copies of the
identity.  For a d x d matrix these are the coefficients of the
characteristic polynomial, c_d is the determinant, and its gradient is the
adjugate.
"""

# %%
import numpy as np

import hyperinv as hi

rng = np.random.default_rng(3)
a = hi.HyperMatrix(rng.standard_normal((4, 4)))

# %% the discriminants, three ways
for s in range(1, 6):
    tuples = hi.discriminant_oracle(a, None, s)
    classes = hi.discriminant(a, s)
    traces = hi.discriminant_from_traces(a, s)
    print(f"c_{s}: tuple sum {tuples: .12f}  class sum {classes: .12f}  traces {traces: .12f}")
print("numpy det:", np.linalg.det(a.data))

# %% c_5 vanishes for a 4x4 matrix; that is what drives Cayley-Hamilton
P = hi.char_poly(a)
print("monomial coefficients:", np.round(P.monomial_coefficients(), 6))
print("numpy poly:           ", np.round(np.poly(a.data), 6))
R = hi.ch_residual_rank2(a)
print("Cayley-Hamilton residual:", np.max(np.abs(R.data)))

# %% inverse from the gradient of the determinant
inv = hi.inverse_rank2(a)
print("sum_k inv[i,k] a[j,k] = delta:", np.allclose(np.einsum("ik,jk->ij", inv.data, a.data), np.eye(4)))
print("upper-index inverse is the transposed numpy inverse:", np.allclose(inv.data.T, np.linalg.inv(a.data)))

# %% invariance: transform lower indices with U and upper ones with U^-1
U = hi.MatrixTransform(np.eye(4) + 0.3 * rng.standard_normal((4, 4)))
a2 = hi.transform_covariant(a, U)
D2 = hi.transform_contravariant(hi.make_unit_delta(2, 4), U)
print("c_2 before / after:", hi.discriminant_oracle(a, None, 2), hi.discriminant_oracle(a2, D2, 2))
