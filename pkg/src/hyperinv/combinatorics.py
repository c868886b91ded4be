"""Integer partitions, cycle census and semi-magic squares.

Everything here is exact integer arithmetic.  A semi-magic square of order
``n`` and rank ``r`` is an ``n x n`` array of nonnegative integers whose rows
and columns all sum to ``r``.  Two squares are equivalent when one can be
obtained from the other by permuting rows and, independently, columns.
Transposition is *not* an equivalence: rows label A-factors and columns label
Delta-factors of a contraction.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

DEFAULT_CAP = 10**7


class ResourceCapError(RuntimeError):
    """Raised when a requested enumeration would exceed the configured cap."""


Square = tuple[tuple[int, ...], ...]


# ---------------------------------------------------------------------------
# permutations


def permutation_sign(p: Sequence[int]) -> int:
    """Parity of a permutation in one-line notation, as +1 or -1."""
    sign = 1
    seen = [False] * len(p)
    for start in range(len(p)):
        if seen[start]:
            continue
        length = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def inverse_permutation(p: Sequence[int]) -> tuple[int, ...]:
    inv = [0] * len(p)
    for i, pi in enumerate(p):
        inv[pi] = i
    return tuple(inv)


def cycle_type(p: Sequence[int]) -> tuple[int, ...]:
    """Cycle lengths of ``p`` in descending order."""
    seen = [False] * len(p)
    lengths = []
    for start in range(len(p)):
        if seen[start]:
            continue
        length = 0
        j = start
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        lengths.append(length)
    return tuple(sorted(lengths, reverse=True))


# ---------------------------------------------------------------------------
# partitions


@dataclass(frozen=True)
class Partition:
    """A partition of ``n`` stored by multiplicities ``m_1..m_n``.

    ``multiplicities[j-1]`` is the number of parts equal to ``j``.
    """

    n: int
    multiplicities: tuple[int, ...]

    def __post_init__(self):
        if len(self.multiplicities) != self.n:
            raise ValueError("need exactly n multiplicities")
        if any(m < 0 for m in self.multiplicities):
            raise ValueError("multiplicities must be nonnegative")
        if sum((j + 1) * m for j, m in enumerate(self.multiplicities)) != self.n:
            raise ValueError("sum of j*m_j must equal n")

    @classmethod
    def from_parts(cls, parts: Sequence[int]) -> "Partition":
        n = sum(parts)
        m = [0] * n
        for p in parts:
            m[p - 1] += 1
        return cls(n, tuple(m))

    @property
    def parts(self) -> tuple[int, ...]:
        """Parts in descending order."""
        out = []
        for j in range(self.n, 0, -1):
            out.extend([j] * self.multiplicities[j - 1])
        return tuple(out)

    @property
    def num_parts(self) -> int:
        return sum(self.multiplicities)


def _parts_descending(n: int, largest: int) -> Iterator[tuple[int, ...]]:
    if n == 0:
        yield ()
        return
    for p in range(min(n, largest), 0, -1):
        for rest in _parts_descending(n - p, p):
            yield (p,) + rest


def partitions(n: int) -> list[Partition]:
    """All partitions of ``n``, ordered by descending multiplicity vector.

    The first entry is ``1^n`` (multiplicities ``(n, 0, ..., 0)``) and the last
    is the single part ``n``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    out = [Partition.from_parts(p) for p in _parts_descending(n, n)]
    out.sort(key=lambda p: p.multiplicities, reverse=True)
    return out


def _series(N: int, exponent) -> list[int]:
    # coefficients of prod_{k>=1} (1 - x^k)^(-exponent(k)) up to x^N
    coeffs = [1] + [0] * N
    for k in range(1, N + 1):
        e = exponent(k)
        # multiply by (1 - x^k)^(-e) = sum_j C(e+j-1, j) x^(k j)
        new = [0] * (N + 1)
        for i, c in enumerate(coeffs):
            if c == 0:
                continue
            j = 0
            while i + k * j <= N:
                new[i + k * j] += c * math.comb(e + j - 1, j)
                j += 1
        coeffs = new
    return coeffs


def partition_count_series(N: int) -> list[int]:
    """p(0), ..., p(N) from the generating function prod (1 - x^n)^-1."""
    if N < 0:
        raise ValueError("N must be >= 0")
    return _series(N, lambda k: 1)


def rank4_class_count_series(N: int) -> list[int]:
    """Coefficients of prod (1 - x^n)^(-n!) up to x^N.

    The series starts 1, 1, 3, 9, 36.  It is only a lower bound for the number
    of rank-4 square classes: at order 4 there are more classes than this.
    """
    if N < 0:
        raise ValueError("N must be >= 0")
    return _series(N, math.factorial)


# ---------------------------------------------------------------------------
# cycle census


@dataclass(frozen=True)
class CycleClass:
    """Conjugacy class of S_n: cycle type, size and sign."""

    partition: Partition
    count: int
    sign: int

    @property
    def label(self) -> tuple[int, ...]:
        """Descending list of ``length - 1`` over the nontrivial cycles.

        The identity has the empty label, a transposition ``(1,)``, a pair of
        transpositions ``(1, 1)``, a 3-cycle with a transposition ``(2, 1)``.
        """
        return tuple(p - 1 for p in self.partition.parts if p > 1)

    @property
    def name(self) -> str:
        return label_name(self.label)


def label_name(label: Sequence[int]) -> str:
    """Compact text form of a cycle label: '0', '1', '1^2', '(2 1)', '2^2'."""
    if not label:
        return "0"
    counts = Counter(label)
    if len(counts) == 1:
        (v, m), = counts.items()
        return str(v) if m == 1 else f"{v}^{m}"
    return "(" + " ".join(str(v) for v in label) + ")"


def cycle_census(n: int) -> list[CycleClass]:
    """One entry per cycle type of S_n, ordered lexicographically by cycle label.

    For n = 4 this gives the identity, transpositions, pairs of transpositions,
    3-cycles and 4-cycles, in that order.
    """
    out = []
    for part in partitions(n):
        denom = 1
        for j, m in enumerate(part.multiplicities, start=1):
            denom *= j**m * math.factorial(m)
        sign = -1 if (n - part.num_parts) % 2 else 1
        out.append(CycleClass(part, math.factorial(n) // denom, sign))
    out.sort(key=lambda c: c.label)
    return out


# ---------------------------------------------------------------------------
# semi-magic squares


@dataclass(frozen=True)
class SemiMagicSquare:
    """Square of nonnegative integers with every row and column summing to r."""

    entries: Square
    r: int = field(default=-1)

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in self.entries)
        n = len(rows)
        if n == 0 or any(len(row) != n for row in rows):
            raise ValueError("square must be n x n with n >= 1")
        if any(x < 0 for row in rows for x in row):
            raise ValueError("entries must be nonnegative")
        r = sum(rows[0])
        if any(sum(row) != r for row in rows) or any(sum(col) != r for col in zip(*rows)):
            raise ValueError("row and column sums must all be equal")
        if self.r not in (-1, r):
            raise ValueError(f"line sums are {r}, expected {self.r}")
        object.__setattr__(self, "entries", rows)
        object.__setattr__(self, "r", r)

    @property
    def n(self) -> int:
        return len(self.entries)

    def transpose(self) -> "SemiMagicSquare":
        return SemiMagicSquare(tuple(zip(*self.entries)))

    def __str__(self):
        return "[" + "; ".join(" ".join(map(str, row)) for row in self.entries) + "]"


@dataclass(frozen=True)
class SquareClass:
    """An orbit of squares under row and column permutations."""

    canonical: SemiMagicSquare
    size: int
    representative_tuple: Optional[object] = None


def _compositions(total: int, parts: int, bounds: Sequence[int]) -> Iterator[tuple[int, ...]]:
    # lexicographic compositions of ``total`` with part i at most bounds[i]
    if parts == 1:
        if total <= bounds[0]:
            yield (total,)
        return
    tail_room = sum(bounds[1:])
    for a in range(max(0, total - tail_room), min(total, bounds[0]) + 1):
        for rest in _compositions(total - a, parts - 1, bounds[1:]):
            yield (a,) + rest


def hn_formula(n: int, r: int) -> int:
    """Number of n x n semi-magic squares with line sum r, closed form, n <= 4."""
    if n < 1 or r < 0:
        raise ValueError("need n >= 1 and r >= 0")
    if n == 1:
        return 1
    if n == 2:
        return r + 1
    if n == 3:
        coeffs = [6, 15, 19, 12, 3]
    elif n == 4:
        coeffs = [24, 258, 1468, 4945, 10532, 14620, 13232, 7544, 2464, 352]
    else:
        raise ValueError("closed form only available for n <= 4")
    return sum(c * _gbinom(r - 1, k) for k, c in enumerate(coeffs))


def _gbinom(x: int, k: int) -> int:
    # binomial coefficient with an arbitrary integer top, so that r = 0 works
    num = 1
    for i in range(k):
        num *= x - i
    return num // math.factorial(k)


def _square_count_bound(n: int, r: int) -> int:
    if n <= 4:
        return hn_formula(n, r)
    return math.comb(r + n - 1, n - 1) ** (n - 1)


def enumerate_semimagic(n: int, r: int, cap: int = DEFAULT_CAP) -> list[SemiMagicSquare]:
    """All n x n semi-magic squares with line sum r, in lexicographic order."""
    if n < 1 or r < 0:
        raise ValueError("need n >= 1 and r >= 0")
    bound = _square_count_bound(n, r)
    if bound > cap:
        raise ResourceCapError(f"{bound} squares for n={n}, r={r} exceeds cap {cap}")
    out: list[SemiMagicSquare] = []

    def extend(rows: list[tuple[int, ...]], remaining: list[int]):
        if len(rows) == n - 1:
            out.append(SemiMagicSquare(tuple(rows) + (tuple(remaining),), r))
            return
        rows_left = n - len(rows) - 1
        for row in _compositions(r, n, remaining):
            # each column must still be fillable by the remaining rows
            rest = [c - x for c, x in zip(remaining, row)]
            if any(c > r * rows_left for c in rest):
                continue
            extend(rows + [row], rest)

    if n == 1:
        return [SemiMagicSquare(((r,),), r)]
    extend([], [r] * n)
    return out


def canonical_entries(sq: Square) -> Square:
    """Lexicographically smallest row-major image under row and column perms.

    For a fixed row order the best column order is obtained by sorting the
    columns as tuples, so only the n! row orders need to be tried.
    """
    n = len(sq)
    best = None
    for rows in itertools.permutations(sq):
        cand = tuple(zip(*sorted(zip(*rows))))
        if best is None or cand < best:
            best = cand
    return best


def canonical_entries_exhaustive(sq: Square) -> Square:
    """Same result as :func:`canonical_entries` by brute force over (n!)^2."""
    n = len(sq)
    best = None
    for rp in itertools.permutations(range(n)):
        for cp in itertools.permutations(range(n)):
            cand = tuple(tuple(sq[i][j] for j in cp) for i in rp)
            if best is None or cand < best:
                best = cand
    return best


def canonicalize(sq: SemiMagicSquare) -> SemiMagicSquare:
    if sq.n > 5:
        raise ValueError("canonicalization is limited to n <= 5")
    return SemiMagicSquare(canonical_entries(sq.entries), sq.r)


def orbit_size(sq: SemiMagicSquare) -> int:
    """Number of distinct squares reachable by row and column permutations."""
    n = sq.n
    images = set()
    for rows in itertools.permutations(sq.entries):
        cols = list(zip(*rows))
        for cp in itertools.permutations(cols):
            images.add(cp)
    return len(images)


def enumerate_classes(n: int, r: int, cap: int = DEFAULT_CAP) -> list[SquareClass]:
    """Group all squares of order n and rank r into classes.

    Classes are sorted by canonical form; each size is the orbit length.
    """
    counts: Counter = Counter()
    for sq in enumerate_semimagic(n, r, cap):
        counts[canonical_entries(sq.entries)] += 1
    return [SquareClass(SemiMagicSquare(c, r), counts[c]) for c in sorted(counts)]
