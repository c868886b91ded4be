"""Polynomial invariants of hypermatrices.

Discriminants, hyperdeterminants, adjugates and Cayley-Hamilton identities for
hypermatrices of rank 2, 3, 4 and 6, with exact semi-magic-square coefficient
tables and numerical oracles to check them.
"""

from .combinatorics import (
    CycleClass,
    Partition,
    ResourceCapError,
    SemiMagicSquare,
    SquareClass,
    canonicalize,
    cycle_census,
    enumerate_classes,
    enumerate_semimagic,
    hn_formula,
    partition_count_series,
    partitions,
    rank4_class_count_series,
)
from .tensor import (
    COVARIANT,
    CONTRAVARIANT,
    HyperMatrix,
    MatrixTransform,
    contract_tuple,
    fd_gradient,
    make_epsilon,
    make_unit_delta,
    symmetrize,
    transform_contravariant,
    transform_covariant,
)
from .engine import (
    InvariantExpansion,
    PermutationTuple,
    build_expansion,
    discriminant,
    discriminant_from_traces,
    discriminant_oracle,
    evaluate_class,
    power_product,
    trace_power,
    tuple_to_square,
)
from .calculus import (
    CharacteristicPolynomial,
    NewtonTraces,
    SingularError,
    adjugate_epsilon,
    bracket_trace,
    ch_residual_rank2,
    ch_residual_rank4,
    char_poly,
    det_epsilon,
    grad_A,
    grad_Delta,
    inverse_even_rank,
    inverse_rank2,
    newton_traces,
    power_tensor,
)
from .special import (
    c2_sym_rank4_d2,
    cayley_hyperdet,
    det_rank4_d2,
    g_matrix,
    odd_rank_epsilon_det,
    sixth_rank_det_d2,
    sixth_rank_det_d2_expanded,
    sixth_rank_embed,
    thirdrank_det_d2,
    thirdrank_discriminants_d2,
    thirdrank_inverse_d2,
    thirdrank_pseudo_inverse,
)

__version__ = "0.1.0"
