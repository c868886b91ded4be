"""Semi-magic squares index the terms of every discriminant.

A term of c_n is fixed by r - 1 permutations of n objects.  Recording, for each
pair (A factor I, Delta factor J), how many index slots join them gives an
n x n square whose rows and columns all sum to r.  Terms whose squares differ
only by reordering rows and columns have the same value for symmetric
tensors, so the expansion collapses to one integer coefficient per class.
"""

# %%
import hyperinv as hi
from hyperinv.io import expansion_to_latex

for r in (2, 4):
    counts = [len(hi.enumerate_semimagic(n, r)) for n in range(1, 5)]
    classes = [len(hi.enumerate_classes(n, r)) for n in range(1, 5)]
    print(f"line sum {r}: squares {counts}, classes {classes}")

# %% closed form for the number of squares
print("H_4(4) closed form:", hi.hn_formula(4, 4), " enumeration:", len(hi.enumerate_semimagic(4, 4)))

# %% the generating function counts 36 order-4 classes, but 43 exist
print("series:", hi.rank4_class_count_series(5))
a = hi.SemiMagicSquare(((3, 0, 0, 1), (0, 3, 0, 1), (0, 1, 2, 1), (1, 0, 2, 1)))
print("a square and its transpose are different classes:",
      hi.canonicalize(a) != hi.canonicalize(a.transpose()))

# %% class coefficients of the order-2 rank-4 discriminant
exp = hi.build_expansion(4, 2)
for sq, c in exp.nonzero_terms().items():
    print(f"{c:+d}  {sq}")
print(expansion_to_latex(exp))

# %% the coefficients always sum to zero: the signed permutation count cancels
for rank, n in [(2, 4), (3, 4), (4, 4), (6, 3)]:
    e = hi.build_expansion(rank, n)
    print(f"rank {rank} order {n}: {len(e.nonzero_terms())} classes, coefficient sum {sum(e.terms.values())}")

# %% cycle census: signed count of S_n by cycle type
for n in range(2, 7):
    print(n, " ".join(f"{c.sign * c.count:+d}*{c.name}" for c in hi.cycle_census(n)))
