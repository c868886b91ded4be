"""Third-rank arrays, and Cayley's 2x2x2 hyperdeterminant.

The alternating contraction of an odd-rank array with epsilons vanishes, so
the naive determinant is useless.  Still, a symmetric 2x2x2 array has a
quartic invariant, equal to Cayley's hyperdeterminant up to a factor 18, whose
gradient gives a genuine inverse.  The quadratic discriminant C_2 does not.
"""

# %%
import numpy as np

import hyperinv as hi

rng = np.random.default_rng(5)
a = hi.symmetrize(hi.HyperMatrix(rng.standard_normal((2, 2, 2))))

# %% odd rank: the epsilon determinant cancels term by term
print("epsilon determinant:", hi.odd_rank_epsilon_det(a))

# %% C_2 gives only a pseudo-inverse
inv2, defect = hi.thirdrank_pseudo_inverse(a)
print("C_2 gradient / C_2, defect from identity:", defect)

# %% the quartic determinant gives a true inverse
inv = hi.thirdrank_inverse_d2(a)
print(np.round(np.einsum("ikl,jkl->ij", inv.data, a.data), 12))

# %% four routes to the same number
C = hi.cayley_hyperdet(a)
print("Cayley:               ", C)
print("18 x quartic det:     ", 18 * hi.thirdrank_det_d2(a))
print("-det g:               ", -hi.g_matrix(a)[1])
print("4/3 x sixth-rank det: ", 4 / 3 * hi.sixth_rank_det_d2(hi.sixth_rank_embed(a)))
