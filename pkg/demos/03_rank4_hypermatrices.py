"""Fourth-rank hypermatrices behave like matrices.

The discriminants C_1..C_d of a d^4 array play the role of the
characteristic-polynomial coefficients: C_d is a determinant, its gradient
gives an inverse, and powers (A^s) defined through Delta-gradients satisfy a
Cayley-Hamilton identity.
"""

# %%
import numpy as np

import hyperinv as hi

rng = np.random.default_rng(11)
A = hi.symmetrize(hi.HyperMatrix(rng.standard_normal((3,) * 4)))

# %% discriminants; C_4 vanishes at d = 3
for s in range(1, 5):
    print(f"C_{s} = {hi.discriminant(A, s): .12f}")

# %% determinant, adjugate and inverse
print("det by epsilon contraction:", hi.det_epsilon(A))
inv = hi.inverse_even_rank(A)
m = np.einsum("iklm,jklm->ij", inv.data, A.data)
print("inverse contracts to the identity:", np.allclose(m, np.eye(3)))
print("gradient route = epsilon route:", np.allclose(hi.grad_A(A, 3).data, hi.adjugate_epsilon(A).data))

# %% power tensors and their traces
for s in range(1, 4):
    print(f"[A^{s}] = {hi.bracket_trace(A, None, s): .10f}")
c1, c2 = hi.discriminant(A, 1), hi.discriminant(A, 2)
print("C_2 from traces:", 0.5 * (hi.bracket_trace(A, None, 1) ** 2 - hi.bracket_trace(A, None, 2)), "vs", c2)

# %% Cayley-Hamilton: sum_k (-1)^k C_k (A^{d-k}) = 0
R = hi.ch_residual_rank4(A)
print("max residual:", np.max(np.abs(R.data)))

# %% it also holds without symmetry
B = hi.HyperMatrix(rng.standard_normal((2,) * 4))
print("non-symmetric d=2 residual:", np.max(np.abs(hi.ch_residual_rank4(B).data)))
print("eight-term determinant:", hi.det_rank4_d2(B), "=", hi.discriminant(B, 2))
