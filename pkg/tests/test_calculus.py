import numpy as np
import pytest

from hyperinv import (
    COVARIANT,
    CONTRAVARIANT,
    HyperMatrix,
    SingularError,
    adjugate_epsilon,
    bracket_trace,
    ch_residual_rank2,
    ch_residual_rank4,
    char_poly,
    det_epsilon,
    discriminant,
    discriminant_oracle,
    fd_gradient,
    grad_A,
    grad_Delta,
    inverse_even_rank,
    inverse_rank2,
    make_unit_delta,
    newton_traces,
    power_tensor,
    trace_power,
)
from hyperinv.special import rank4_order2_patterns

from conftest import diag4, rand_sym, rand_tensor


def test_grad_A_examples(rng):
    a = rand_tensor(rng, 2, 3)
    assert np.allclose(grad_A(a, 1).data, np.eye(3))
    A = rand_tensor(rng, 4, 2)
    g = grad_A(A, 2).data
    assert g[0, 0, 0, 0] == pytest.approx(A.data[1, 1, 1, 1])
    assert g[0, 0, 0, 1] == pytest.approx(-A.data[1, 1, 1, 0])
    assert grad_A(A, 2).variance == CONTRAVARIANT


def test_grad_Delta_examples(rng):
    a = rand_tensor(rng, 2, 3)
    assert np.allclose(grad_Delta(a, None, 1).data, a.data)
    A = rand_tensor(rng, 4, 3)
    assert np.allclose(grad_Delta(A, None, 1).data, A.data)
    assert grad_Delta(A, None, 2).variance == COVARIANT


@pytest.mark.parametrize("r,d", [(2, 2), (2, 3), (4, 2), (4, 3)])
def test_gradients_vs_finite_differences(rng, r, d):
    A = rand_tensor(rng, r, d)
    D = make_unit_delta(r, d)
    for s in (1, 2, 3):
        fa = fd_gradient(lambda X: discriminant_oracle(X, None, s), A).data
        fd = fd_gradient(lambda X: discriminant_oracle(A, X, s), D).data
        assert np.max(np.abs(grad_A(A, s).data - fa)) <= 1e-5 * max(1.0, np.max(np.abs(fa)))
        assert np.max(np.abs(grad_Delta(A, None, s).data - fd)) <= 1e-5 * max(1.0, np.max(np.abs(fd)))


@pytest.mark.parametrize("r,d", [(2, 3), (3, 2), (4, 2), (4, 3)])
def test_euler_identities(rng, r, d):
    A = rand_tensor(rng, r, d)
    D = make_unit_delta(r, d)
    for s in (1, 2, 3):
        c = discriminant_oracle(A, None, s)
        assert np.sum(A.data * grad_A(A, s).data) == pytest.approx(s * c, rel=1e-10, abs=1e-12)
        assert np.sum(D.data * grad_Delta(A, None, s).data) == pytest.approx(s * c, rel=1e-10, abs=1e-12)


def test_gradient_with_general_delta(rng):
    A = rand_tensor(rng, 3, 2)
    D = HyperMatrix(rng.standard_normal((2, 2, 2)), CONTRAVARIANT)
    fa = fd_gradient(lambda X: discriminant_oracle(X, D, 2), A).data
    fd = fd_gradient(lambda X: discriminant_oracle(A, X, 2), D).data
    assert np.allclose(grad_A(A, 2, D).data, fa, rtol=1e-5, atol=1e-7)
    assert np.allclose(grad_Delta(A, D, 2).data, fd, rtol=1e-5, atol=1e-7)


def test_char_poly_example():
    P = char_poly(HyperMatrix([[1.0, 2.0], [3.0, 4.0]]))
    assert np.allclose(P.monomial_coefficients(), [1, -5, -2])
    assert P(0.0) == pytest.approx(-2)


@pytest.mark.parametrize("d", range(1, 6))
def test_char_poly_is_det_lambda_minus_a(rng, d):
    a = rand_tensor(rng, 2, d)
    P = char_poly(a)
    assert P.degree == d
    for lam in rng.standard_normal(5):
        shifted = HyperMatrix(a.data - lam * np.eye(d))
        expected = (-1) ** d * discriminant(shifted, d)
        assert P(lam) == pytest.approx(expected, rel=1e-9, abs=1e-9)
        assert P(lam) == pytest.approx(np.linalg.det(lam * np.eye(d) - a.data), rel=1e-9, abs=1e-9)


def test_ch_residual_rank2(rng):
    assert np.all(ch_residual_rank2(HyperMatrix([[0.0, 1.0], [0.0, 0.0]])).data == 0)
    assert np.all(ch_residual_rank2(HyperMatrix([[3.5]])).data == 0)
    a = rand_tensor(rng, 2, 4)
    norm = np.linalg.norm(a.data, 2)
    assert np.max(np.abs(ch_residual_rank2(a).data)) <= 1e-9 * max(1.0, norm) ** 4


def test_inverse_rank2_examples():
    inv = inverse_rank2(HyperMatrix([[1.0, 2.0], [3.0, 4.0]]))
    # upper-index layout is the transpose of the usual inverse
    assert np.allclose(inv.data.T, [[-2, 1], [1.5, -0.5]])
    assert np.allclose(inverse_rank2(HyperMatrix(np.eye(3))).data, np.eye(3))
    with pytest.raises(SingularError):
        inverse_rank2(HyperMatrix([[1.0, 2.0], [2.0, 4.0]]))


@pytest.mark.parametrize("d", range(1, 6))
def test_inverse_rank2_contraction(rng, d):
    a = rand_tensor(rng, 2, d)
    m = np.einsum("ik,jk->ij", inverse_rank2(a).data, a.data)
    assert np.max(np.abs(m - np.eye(d))) <= 1e-9


def test_adjugate_rank2_example():
    adj = adjugate_epsilon(HyperMatrix([[1.0, 2.0], [3.0, 4.0]]))
    assert np.allclose(adj.data, [[4, -3], [-2, 1]])


def test_rank4_d2_adjugate_and_inverse(rng):
    A = rand_tensor(rng, 4, 2)
    assert adjugate_epsilon(A).data[0, 0, 0, 0] == pytest.approx(A.data[1, 1, 1, 1])
    D = diag4(2, 3)
    assert det_epsilon(D) == pytest.approx(6)
    assert inverse_even_rank(D).data[0, 0, 0, 0] == pytest.approx(0.5)
    unit = make_unit_delta(4, 2, COVARIANT)
    assert np.allclose(inverse_even_rank(unit).data, make_unit_delta(4, 2).data)


@pytest.mark.parametrize("d", [2, 3])
def test_rank4_inverse_contraction(rng, d):
    A = rand_tensor(rng, 4, d)
    inv = inverse_even_rank(A).data
    m = np.einsum("iklm,jklm->ij", inv, A.data)
    assert np.max(np.abs(m - np.eye(d))) <= 1e-9
    assert np.einsum("ijk,ijk->", inv[0], A.data[0]) == pytest.approx(1, abs=1e-9)
    assert np.einsum("ijk,ijk->", inv[0], A.data[1]) == pytest.approx(0, abs=1e-9)


@pytest.mark.parametrize("d", [2, 3])
def test_gradient_route_equals_epsilon_route(rng, d):
    A = rand_tensor(rng, 4, d)
    assert np.allclose(grad_A(A, d).data, adjugate_epsilon(A).data, rtol=1e-10, atol=1e-12)
    assert det_epsilon(A) == pytest.approx(discriminant_oracle(A, None, d), rel=1e-10)


def test_singular_rank4():
    with pytest.raises(SingularError):
        inverse_even_rank(HyperMatrix(np.zeros((2,) * 4)))


def test_newton_traces(rng):
    a = rand_tensor(rng, 2, 4)
    cs = [discriminant(a, k) for k in range(1, 5)]
    t = newton_traces(cs).values
    assert t[0] == cs[0]
    for s in range(1, 5):
        assert t[s - 1] == pytest.approx(trace_power(a, s) / s, rel=1e-10)
    T = newton_traces(cs[:2], rank=4).values
    assert T[1] == pytest.approx(0.5 * cs[0] ** 2 - cs[1])


def test_power_tensor_examples(rng):
    A = rand_tensor(rng, 4, 3)
    assert np.allclose(power_tensor(A, None, 1).data, A.data)
    G = rand_sym(rng, 4, 2)
    pats = rank4_order2_patterns(G)
    assert np.allclose(power_tensor(G, None, 2).data, 4 * pats["31"].data - 3 * pats["22"].data, atol=1e-12)


@pytest.mark.parametrize("d", [2, 3])
def test_bracket_traces(rng, d):
    A = rand_sym(rng, 4, d)
    c1, c2, c3 = (discriminant(A, s) for s in (1, 2, 3))
    b1, b2, b3 = (bracket_trace(A, None, s) for s in (1, 2, 3))
    assert b1 == pytest.approx(c1, rel=1e-10)
    assert b2 == pytest.approx(c1 ** 2 - 2 * c2, rel=1e-10)
    assert c2 == pytest.approx(0.5 * (b1 ** 2 - b2), rel=1e-10)
    # c3 = (1/6)([A]^3 - 3[A][A^2] + 2[A^3])
    assert c3 == pytest.approx((b1 ** 3 - 3 * b1 * b2 + 2 * b3) / 6, rel=1e-9, abs=1e-12)


@pytest.mark.parametrize("d", [1, 2, 3])
def test_ch_residual_rank4(rng, d):
    A = rand_sym(rng, 4, d)
    R = ch_residual_rank4(A)
    if d == 1:
        assert np.all(R.data == 0)
    assert np.max(np.abs(R.data)) <= 1e-8 * max(1.0, A.scale()) ** d


def test_ch_residual_rank4_rejects_bad_input(rng):
    with pytest.raises(ValueError):
        ch_residual_rank4(rand_tensor(rng, 2, 2))
    with pytest.raises(ValueError):
        ch_residual_rank4(rand_tensor(rng, 4, 2), d=3)
