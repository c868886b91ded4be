"""Discriminant expansions built from signed permutation tuples.

A discriminant of order ``s`` of a rank-r hypermatrix is

    C_s = (1/s!) * sum over (sigma_2, ..., sigma_r) in S_s^(r-1) of
          sign * contract_tuple(A, Delta, sigma)

with sigma_1 fixed to the identity.  Each tuple maps to a semi-magic square;
for symmetric A every tuple in one square class contributes the same value,
so the sum collapses to integer coefficients over square classes.
"""

from __future__ import annotations

import itertools
import math
import os
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Optional, Sequence

import numpy as np

from .combinatorics import (
    DEFAULT_CAP,
    ResourceCapError,
    SemiMagicSquare,
    SquareClass,
    Square,
    canonical_entries,
    cycle_census,
    orbit_size,
    partitions,
    permutation_sign,
)
from .tensor import (
    HyperMatrix,
    check_pair,
    contract_tuple,
    diagonal_kernel,
    diagonal_weights,
    einsum_term,
    make_unit_delta,
    tuple_perms,
    wiring,
)

SUPPORTED_RANKS = (2, 3, 4, 6)


def resolve_cap(cap: Optional[int] = None) -> int:
    """Explicit cap, else the HYPERINV_CAP environment variable, else 10^7."""
    if cap is not None:
        return int(cap)
    env = os.environ.get("HYPERINV_CAP")
    if env:
        return int(env)
    return DEFAULT_CAP


def _check_tuple_count(rank: int, n: int, cap: Optional[int]) -> int:
    total = math.factorial(n) ** (rank - 1)
    limit = resolve_cap(cap)
    if total > limit:
        raise ResourceCapError(f"{total} permutation tuples for rank {rank}, order {n} exceeds cap {limit}")
    return total


@dataclass(frozen=True)
class PermutationTuple:
    """The permutations sigma_2..sigma_r of one signed expansion term."""

    perms: tuple[tuple[int, ...], ...]
    n: int = field(default=-1)

    def __post_init__(self):
        perms = tuple(tuple(int(x) for x in p) for p in self.perms)
        if not perms:
            raise ValueError("need at least one permutation")
        n = len(perms[0])
        for p in perms:
            if sorted(p) != list(range(n)):
                raise ValueError(f"{p} is not a permutation of range({n})")
        if self.n not in (-1, n):
            raise ValueError(f"permutations have order {n}, expected {self.n}")
        object.__setattr__(self, "perms", perms)
        object.__setattr__(self, "n", n)

    @property
    def rank(self) -> int:
        return len(self.perms) + 1

    @property
    def sign(self) -> int:
        s = 1
        for p in self.perms:
            s *= permutation_sign(p)
        return s


def tuple_to_square(t: PermutationTuple) -> SemiMagicSquare:
    """s[I][J] = number of slots k with sigma_k(I) = J (sigma_1 = identity)."""
    n = t.n
    sq = [[0] * n for _ in range(n)]
    for I in range(n):
        sq[I][I] += 1
    for p in t.perms:
        for I in range(n):
            sq[I][p[I]] += 1
    return SemiMagicSquare(tuple(map(tuple, sq)), t.rank)


@dataclass(frozen=True)
class InvariantExpansion:
    """Integer coefficients over square classes, with overall prefactor 1/n!.

    Classes reached by some tuple are all kept, including any whose signed
    count cancels to zero.
    """

    rank: int
    order: int
    terms: dict
    representatives: dict

    @property
    def prefactor_denominator(self) -> int:
        return math.factorial(self.order)

    def nonzero_terms(self) -> dict:
        return {sq: c for sq, c in self.terms.items() if c != 0}

    def classes(self) -> list[SquareClass]:
        return [
            SquareClass(SemiMagicSquare(sq, self.rank), orbit_size(SemiMagicSquare(sq, self.rank)),
                        self.representatives[sq])
            for sq in self.terms
        ]


def _perm_tables(n: int):
    perms = list(itertools.permutations(range(n)))
    signs = np.array([permutation_sign(p) for p in perms], dtype=np.int64)
    inverses = np.array([np.argsort(p) for p in perms], dtype=np.intp).reshape(len(perms), n)
    return perms, signs, inverses


def iter_tuple_chunks(rank: int, n: int, chunk: int = 1 << 16) -> Iterator[tuple[np.ndarray, np.ndarray, np.ndarray]]:
    """Yield (digits, tau, signs) blocks in odometer order.

    ``digits[t]`` are indices into the lexicographic list of permutations of
    range(n); ``tau`` has shape (T, rank, n) as used by the contraction kernels.
    """
    perms, signs, inverses = _perm_tables(n)
    m = len(perms)
    total = m ** (rank - 1)
    ident = np.arange(n, dtype=np.intp)
    for lo in range(0, total, chunk):
        idx = np.arange(lo, min(total, lo + chunk))
        digits = np.stack(np.unravel_index(idx, (m,) * (rank - 1)), axis=1)
        tau = np.empty((len(idx), rank, n), dtype=np.intp)
        tau[:, 0, :] = ident
        tau[:, 1:, :] = inverses[digits]
        sg = np.prod(signs[digits], axis=1)
        yield digits, tau, sg


@lru_cache(maxsize=None)
def _build(rank: int, n: int) -> InvariantExpansion:
    perms, signs, _ = _perm_tables(n)
    m = len(perms)
    pm = np.zeros((m, n * n), dtype=np.int64)
    for t, p in enumerate(perms):
        for I in range(n):
            pm[t, I * n + p[I]] = 1
    eye = np.eye(n, dtype=np.int64).ravel()
    base = rank + 1
    weights = base ** np.arange(n * n - 1, -1, -1, dtype=np.int64)

    raw: dict[int, list] = {}
    offset = 0
    for digits, _, sg in iter_tuple_chunks(rank, n):
        sq = eye + pm[digits].sum(axis=1)
        codes = sq @ weights
        uniq, first, inv = np.unique(codes, return_index=True, return_inverse=True)
        sums = np.zeros(len(uniq), dtype=np.int64)
        np.add.at(sums, inv.ravel(), sg)
        for code, f, s in zip(uniq.tolist(), first.tolist(), sums.tolist()):
            if code in raw:
                raw[code][0] += s
            else:
                raw[code] = [s, offset + f]
        offset += len(digits)

    terms: dict[Square, int] = {}
    first_tuple: dict[Square, int] = {}
    for code, (s, f) in raw.items():
        digs = []
        for _ in range(n * n):
            code, dgt = divmod(code, base)
            digs.append(dgt)
        digs.reverse()
        square = tuple(tuple(digs[i * n:(i + 1) * n]) for i in range(n))
        canon = canonical_entries(square)
        terms[canon] = terms.get(canon, 0) + s
        first_tuple[canon] = min(first_tuple.get(canon, f), f)

    order = sorted(terms)
    reps = {}
    for sq in order:
        digits = np.unravel_index(first_tuple[sq], (m,) * (rank - 1))
        reps[sq] = PermutationTuple(tuple(perms[int(d)] for d in digits))
    return InvariantExpansion(rank, n, {sq: terms[sq] for sq in order}, reps)


def build_expansion(rank: int, n: int, cap: Optional[int] = None) -> InvariantExpansion:
    """Class coefficients of the order-n discriminant for the given rank.

    All (n!)^(rank-1) tuples are enumerated, so the count is checked against
    the tuple cap first.  Results are cached per (rank, n).
    """
    if rank not in SUPPORTED_RANKS:
        raise ValueError(f"rank must be one of {SUPPORTED_RANKS}")
    if n < 1:
        raise ValueError("order must be >= 1")
    _check_tuple_count(rank, n, cap)
    return _build(rank, n)


def _unit_if_none(A: HyperMatrix, Delta: Optional[HyperMatrix]) -> HyperMatrix:
    return make_unit_delta(A.rank, A.dim) if Delta is None else Delta


def discriminant_oracle(A: HyperMatrix, Delta: Optional[HyperMatrix], s: int,
                        cap: Optional[int] = None) -> float:
    """Direct signed sum over all tuples, valid for any A and Delta."""
    if s < 1:
        raise ValueError("s must be >= 1")
    Delta = _unit_if_none(A, Delta)
    check_pair(A, Delta)
    _check_tuple_count(A.rank, s, cap)
    w = diagonal_weights(Delta)
    total = 0.0
    for _, tau, sg in iter_tuple_chunks(A.rank, s):
        if w is not None:
            total += float(np.sum(diagonal_kernel(A.data, w, tau, sg.astype(np.float64))))
        else:
            for t in range(len(tau)):
                total += float(sg[t]) * float(einsum_term(A.data, Delta.data, tau[t]))
    return total / math.factorial(s)


def _require_symmetric(A: HyperMatrix):
    if not A.is_symmetric(1e-12):
        raise ValueError("per-class values need a symmetric tensor")


def evaluate_class(A: HyperMatrix, Delta: Optional[HyperMatrix], cls) -> float:
    """Value of one square class: the contraction of its representative tuple.

    ``cls`` may be a SquareClass, a SemiMagicSquare or a nested tuple of rows.
    """
    _require_symmetric(A)
    Delta = _unit_if_none(A, Delta)
    rep = getattr(cls, "representative_tuple", None)
    if rep is None:
        sq = getattr(cls, "canonical", cls)
        sq = getattr(sq, "entries", sq)
        sq = tuple(tuple(int(x) for x in row) for row in sq)
        if sum(sq[0]) != A.rank:
            raise ValueError(f"square has line sum {sum(sq[0])}, tensor has rank {A.rank}")
        exp = build_expansion(A.rank, len(sq))
        canon = canonical_entries(sq)
        if canon not in exp.representatives:
            raise ValueError("square class is never produced by a permutation tuple")
        rep = exp.representatives[canon]
    return contract_tuple(A, Delta, rep)


def discriminant(A: HyperMatrix, s: int, Delta: Optional[HyperMatrix] = None,
                 cap: Optional[int] = None) -> float:
    """Order-s discriminant.

    Uses the class expansion when A is symmetric and Delta diagonal, and the
    direct tuple sum otherwise.
    """
    if s < 1:
        raise ValueError("s must be >= 1")
    Delta = _unit_if_none(A, Delta)
    check_pair(A, Delta)
    w = diagonal_weights(Delta)
    if w is None or A.rank not in SUPPORTED_RANKS or not A.is_symmetric(1e-12):
        return discriminant_oracle(A, Delta, s, cap)
    exp = build_expansion(A.rank, s, cap)
    squares = list(exp.nonzero_terms())
    if not squares:
        return 0.0
    tau = np.stack([wiring(tuple_perms(exp.representatives[sq]), A.rank) for sq in squares])
    coeffs = np.array([exp.terms[sq] for sq in squares], dtype=np.float64)
    return float(np.sum(diagonal_kernel(A.data, w, tau, coeffs))) / math.factorial(s)


def _as_matrix(a: HyperMatrix) -> np.ndarray:
    if a.rank != 2:
        raise ValueError("expected a rank-2 hypermatrix")
    return a.data


def trace_power(a: HyperMatrix, s: int) -> float:
    """trace(a^s); s = 0 gives the dimension."""
    if s < 0:
        raise ValueError("s must be >= 0")
    return float(np.trace(np.linalg.matrix_power(_as_matrix(a), s)))


def discriminant_from_traces(a: HyperMatrix, s: int) -> float:
    """c_s from the power traces, summing over the partitions of s."""
    if not 1 <= s <= 8:
        raise ValueError("s must be in 1..8")
    traces = [trace_power(a, j) for j in range(s + 1)]
    total = 0.0
    for part in partitions(s):
        term = 1.0
        for j, m in enumerate(part.multiplicities, start=1):
            if m:
                term *= (-1) ** ((j - 1) * m) * traces[j] ** m / (j**m * math.factorial(m))
        total += term
    return total


def power_product(n: int, k: int) -> dict:
    """Expand (sum over cycle types of sign * count * label)^k.

    Keys are sorted tuples of cycle labels (see CycleClass.label), so a
    product like 0*1*1 is ``((), (1,), (1,))``.  Values are exact integers.
    """
    if not (1 <= n <= 6 and 1 <= k <= 5):
        raise ValueError("need 1 <= n <= 6 and 1 <= k <= 5")
    weights = {c.label: c.sign * c.count for c in cycle_census(n)}
    labels = sorted(weights)
    out = {}
    for combo in itertools.combinations_with_replacement(labels, k):
        coeff = math.factorial(k)
        for m in Counter(combo).values():
            coeff //= math.factorial(m)
        for lab in combo:
            coeff *= weights[lab]
        out[combo] = coeff
    return out
