import math

import numpy as np
import pytest

from hyperinv import (
    HyperMatrix,
    PermutationTuple,
    ResourceCapError,
    build_expansion,
    discriminant,
    discriminant_from_traces,
    discriminant_oracle,
    evaluate_class,
    make_unit_delta,
    power_product,
    trace_power,
    tuple_to_square,
)
from hyperinv.engine import iter_tuple_chunks, resolve_cap

from conftest import diag4, rand_sym, rand_tensor


def test_tuple_to_square_examples():
    t = PermutationTuple(((0, 1),))
    assert tuple_to_square(t).entries == ((2, 0), (0, 2)) and t.sign == 1
    t = PermutationTuple(((1, 0),))
    assert tuple_to_square(t).entries == ((1, 1), (1, 1)) and t.sign == -1
    t = PermutationTuple(((1, 0),) * 3)
    assert tuple_to_square(t).entries == ((1, 3), (3, 1)) and t.sign == -1
    assert t.rank == 4


def test_permutation_tuple_validation():
    with pytest.raises(ValueError):
        PermutationTuple(((0, 0),))
    with pytest.raises(ValueError):
        PermutationTuple(((0, 1), (0, 1, 2)))


def test_expansion_examples():
    e = build_expansion(2, 2)
    assert e.nonzero_terms() == {((0, 2), (2, 0)): 1, ((1, 1), (1, 1)): -1}
    assert e.prefactor_denominator == 2
    assert build_expansion(4, 2).nonzero_terms() == {((0, 4), (4, 0)): 1, ((1, 3), (3, 1)): -4, ((2, 2), (2, 2)): 3}
    assert build_expansion(3, 2).nonzero_terms() == {((0, 3), (3, 0)): 1, ((1, 2), (2, 1)): -1}
    assert sorted(build_expansion(2, 3).nonzero_terms().values()) == [-3, 1, 2]
    assert sorted(build_expansion(6, 2).nonzero_terms().values()) == [-10, -6, 1, 15]


@pytest.mark.parametrize("rank,n,total", [(4, 4, 13824), (6, 3, 7776), (3, 3, 36)])
def test_tuple_counts(rank, n, total):
    assert sum(len(d) for d, _, _ in iter_tuple_chunks(rank, n, chunk=1000)) == total


@pytest.mark.parametrize("rank,n", [(2, 3), (2, 4), (3, 3), (4, 3), (6, 3)])
def test_expansion_coefficients_balance(rank, n):
    # the signed tuple count over all classes sums to zero
    assert sum(build_expansion(rank, n).terms.values()) == 0


def test_cap_enforced(monkeypatch):
    with pytest.raises(ResourceCapError):
        build_expansion(4, 5, cap=1000)
    monkeypatch.setenv("HYPERINV_CAP", "17")
    assert resolve_cap(None) == 17
    with pytest.raises(ResourceCapError):
        discriminant_oracle(rand_tensor(np.random.default_rng(0), 4, 2), None, 3)


def test_discriminant_examples():
    a = HyperMatrix([[1.0, 2.0], [3.0, 4.0]])
    assert discriminant(a, 2) == pytest.approx(-2)
    assert discriminant(HyperMatrix(np.diag([2.0, 5.0])), 2) == pytest.approx(10)
    assert discriminant(diag4(2, 3), 2) == pytest.approx(6)
    x = np.arange(16.0).reshape((2,) * 4)
    assert discriminant(HyperMatrix(x), 1) == pytest.approx(x[0, 0, 0, 0] + x[1, 1, 1, 1])


def test_discriminant_sym_rank4_example():
    g = np.zeros((2,) * 4)
    g[0, 0, 0, 0] = g[1, 1, 1, 1] = 1
    for idx in [(0, 0, 1, 1), (0, 1, 0, 1), (0, 1, 1, 0), (1, 0, 0, 1), (1, 0, 1, 0), (1, 1, 0, 0)]:
        g[idx] = 1
    assert discriminant(HyperMatrix(g), 2) == pytest.approx(4)


def test_third_rank_order2_closed_form(rng):
    a = rand_sym(rng, 3, 2)
    x = a.data
    expected = x[0, 0, 0] * x[1, 1, 1] - (x[0, 0, 1] * x[1, 1, 0] + x[0, 1, 0] * x[1, 0, 1] + x[1, 0, 0] * x[0, 1, 1]) / 3
    assert discriminant(a, 2) == pytest.approx(expected, rel=1e-12)


def test_evaluate_class_rank2(rng):
    a = rand_sym(rng, 2, 3)
    tr = np.trace(a.data)
    assert evaluate_class(a, None, ((1, 1), (1, 1))) == pytest.approx(np.trace(a.data @ a.data))
    assert evaluate_class(a, None, ((2, 0), (0, 2))) == pytest.approx(tr ** 2)
    with pytest.raises(ValueError):
        evaluate_class(rand_tensor(rng, 2, 3), None, ((1, 1), (1, 1)))


@pytest.mark.parametrize("rank,d,s", [(2, 3, 3), (3, 2, 2), (3, 3, 3), (4, 2, 2), (4, 3, 3), (6, 2, 2)])
def test_class_expansion_matches_oracle(rng, rank, d, s):
    for _ in range(3):
        A = rand_sym(rng, rank, d)
        assert discriminant(A, s) == pytest.approx(discriminant_oracle(A, None, s), rel=1e-10, abs=1e-10)


def test_nondiagonal_delta_uses_oracle(rng):
    A = rand_sym(rng, 2, 3)
    M = rng.standard_normal((3, 3))
    D = HyperMatrix(M, "contravariant")
    # c_2 with a general metric-like Delta equals c_2 of the mixed matrix a.D
    mixed = HyperMatrix(A.data @ M.T)
    assert discriminant(A, 2, D) == pytest.approx(discriminant(mixed, 2), rel=1e-10)


@pytest.mark.parametrize("d", range(1, 5))
def test_rank2_vanishing_above_dimension(rng, d):
    a = rand_tensor(rng, 2, d)
    for s in range(d + 1, 6):
        assert abs(discriminant(a, s)) <= 1e-9 * max(1.0, a.scale()) ** s


def test_rank4_vanishing_order3_dim2(rng):
    A = rand_sym(rng, 4, 2)
    assert abs(discriminant(A, 3)) <= 1e-9 * max(1.0, A.scale()) ** 3


def test_trace_power():
    assert trace_power(HyperMatrix(np.diag([2.0, 3.0])), 2) == 13
    assert trace_power(HyperMatrix(np.eye(4)), 0) == 4
    assert trace_power(HyperMatrix([[0.0, 1.0], [0.0, 0.0]]), 2) == 0


def test_traces_route(rng):
    a = rand_tensor(rng, 2, 4)
    t1, t2 = trace_power(a, 1), trace_power(a, 2)
    assert discriminant_from_traces(a, 2) == pytest.approx((t1 ** 2 - t2) / 2)
    for s in range(1, 6):
        assert discriminant_from_traces(a, s) == pytest.approx(discriminant_oracle(a, None, s), rel=1e-10, abs=1e-12)
    assert discriminant_from_traces(a, 4) == pytest.approx(np.linalg.det(a.data), rel=1e-10)


def test_power_product_examples():
    p = power_product(2, 3)
    assert p == {((), (), ()): 1, ((), (), (1,)): -3, ((), (1,), (1,)): 3, ((1,), (1,), (1,)): -1}
    assert sorted(power_product(3, 2).values()) == sorted([1, -6, 9, 4, -12, 4])
    for n, k in [(3, 3), (4, 2), (4, 3), (5, 2)]:
        assert sum(power_product(n, k).values()) == 0


def test_unit_delta_default_matches_explicit(rng):
    A = rand_sym(rng, 4, 3)
    assert discriminant(A, 2) == pytest.approx(discriminant(A, 2, make_unit_delta(4, 3)))
    assert discriminant(A, 2) == pytest.approx(discriminant_oracle(A, None, 2), rel=1e-12)
    assert math.isfinite(discriminant(A, 3))
