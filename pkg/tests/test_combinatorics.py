import itertools
import math

import pytest

from hyperinv import (
    Partition,
    ResourceCapError,
    SemiMagicSquare,
    canonicalize,
    cycle_census,
    enumerate_classes,
    enumerate_semimagic,
    hn_formula,
    partition_count_series,
    partitions,
    rank4_class_count_series,
)
from hyperinv.combinatorics import (
    canonical_entries,
    canonical_entries_exhaustive,
    cycle_type,
    inverse_permutation,
    label_name,
    orbit_size,
    permutation_sign,
)


def test_permutation_helpers():
    assert permutation_sign((0, 1, 2)) == 1
    assert permutation_sign((1, 0, 2)) == -1
    assert permutation_sign((1, 2, 0)) == 1
    assert inverse_permutation((1, 2, 0)) == (2, 0, 1)
    assert sorted(cycle_type((1, 0, 3, 4, 2))) == [2, 3]


def test_sign_is_parity_of_transpositions():
    for p in itertools.permutations(range(5)):
        assert permutation_sign(p) == (-1) ** (5 - len(cycle_type(p)))


def test_partitions_small():
    assert [p.parts for p in partitions(1)] == [(1,)]
    m4 = {p.multiplicities for p in partitions(4)}
    assert m4 == {(4, 0, 0, 0), (2, 1, 0, 0), (0, 2, 0, 0), (1, 0, 1, 0), (0, 0, 0, 1)}
    assert len(partitions(6)) == 11
    ms = [p.multiplicities for p in partitions(6)]
    assert ms == sorted(ms, reverse=True)


def test_partition_validation():
    assert Partition.from_parts([3, 1]).multiplicities == (1, 0, 1, 0)
    with pytest.raises(ValueError):
        Partition(3, (1, 0, 0))


def test_partition_series():
    assert partition_count_series(9) == [1, 1, 2, 3, 5, 7, 11, 15, 22, 30]
    assert partition_count_series(0) == [1]
    p = partition_count_series(12)
    assert all(len(partitions(n)) == p[n] for n in range(1, 13))


def test_rank4_class_series():
    assert rank4_class_count_series(4) == [1, 1, 3, 9, 36]
    assert rank4_class_count_series(0) == [1]
    assert rank4_class_count_series(5)[5] == 168


def test_cycle_census_examples():
    assert [(c.count, c.sign) for c in cycle_census(1)] == [(1, 1)]
    assert [(c.name, c.count, c.sign) for c in cycle_census(3)] == [("0", 1, 1), ("1", 3, -1), ("2", 2, 1)]
    c4 = cycle_census(4)
    assert [c.count for c in c4] == [1, 6, 3, 8, 6]
    assert [c.sign for c in c4] == [1, -1, 1, 1, -1]


@pytest.mark.parametrize("n", range(1, 8))
def test_cycle_census_totals(n):
    census = cycle_census(n)
    assert sum(c.count for c in census) == math.factorial(n)
    assert sum(c.sign * c.count for c in census) == (1 if n == 1 else 0)


def test_label_names():
    assert label_name(()) == "0"
    assert label_name((1, 1)) == "1^2"
    assert label_name((2, 1)) == "(2 1)"


def test_semimagic_validation():
    assert SemiMagicSquare(((1, 1), (1, 1))).r == 2
    with pytest.raises(ValueError):
        SemiMagicSquare(((1, 0), (1, 1)))
    with pytest.raises(ValueError):
        SemiMagicSquare(((2, -1), (-1, 2)))
    with pytest.raises(ValueError):
        SemiMagicSquare(((1, 1), (1, 1)), r=3)


def test_enumerate_examples():
    assert {s.entries for s in enumerate_semimagic(2, 2)} == {((2, 0), (0, 2)), ((1, 1), (1, 1)), ((0, 2), (2, 0))}
    assert len(enumerate_semimagic(4, 2)) == 282
    assert len(enumerate_semimagic(1, 7)) == 1
    assert len(enumerate_semimagic(3, 0)) == 1


def test_closed_form():
    assert hn_formula(3, 2) == 21
    assert hn_formula(3, 4) == 120
    assert hn_formula(4, 4) == 10147
    for n in range(1, 5):
        for r in range(5):
            assert hn_formula(n, r) == len(enumerate_semimagic(n, r))


def test_enumeration_cap():
    with pytest.raises(ResourceCapError):
        enumerate_semimagic(5, 5, cap=1000)


def test_canonicalize_examples():
    assert canonicalize(SemiMagicSquare(((2, 0), (0, 2)))).entries == ((0, 2), (2, 0))
    assert canonicalize(SemiMagicSquare(((1, 1), (1, 1)))).entries == ((1, 1), (1, 1))


def test_canonical_fast_matches_exhaustive():
    for sq in enumerate_semimagic(3, 3):
        assert canonical_entries(sq.entries) == canonical_entries_exhaustive(sq.entries)
    for sq in enumerate_semimagic(4, 2):
        assert canonical_entries(sq.entries) == canonical_entries_exhaustive(sq.entries)


def test_transpose_is_not_an_equivalence():
    # a transposed pair: same connectivity, but rows index A and columns index Delta
    a = SemiMagicSquare(((3, 0, 0, 1), (0, 3, 0, 1), (0, 1, 2, 1), (1, 0, 2, 1)))
    b = SemiMagicSquare(((3, 0, 0, 1), (0, 3, 1, 0), (0, 0, 2, 2), (1, 1, 1, 1)))
    assert canonicalize(a) != canonicalize(b)
    assert canonicalize(a.transpose()) == canonicalize(b)


def test_class_counts_r2():
    assert [len(enumerate_classes(n, 2)) for n in range(1, 5)] == [1, 2, 3, 5]


def test_classes_partition_all_squares():
    for n, r in [(3, 2), (3, 4), (4, 2)]:
        classes = enumerate_classes(n, r)
        assert sum(c.size for c in classes) == len(enumerate_semimagic(n, r))
        for c in classes:
            assert orbit_size(c.canonical) == c.size
