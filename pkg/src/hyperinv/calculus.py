"""Gradients of discriminants, inverses, power tensors and Cayley-Hamilton residuals.

All gradients are formal-entry gradients: each of the d^r components is an
independent variable, even when the tensor happens to be symmetric.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .combinatorics import permutation_sign
from .engine import _check_tuple_count, discriminant_from_traces, iter_tuple_chunks
from .tensor import (
    CONTRAVARIANT,
    COVARIANT,
    HyperMatrix,
    check_pair,
    diagonal_weights,
    einsum_term,
    make_unit_delta,
)


class SingularError(ArithmeticError):
    """Raised when an inverse is requested for a (numerically) singular input."""


def _unit_if_none(A: HyperMatrix, Delta: Optional[HyperMatrix]) -> HyperMatrix:
    return make_unit_delta(A.rank, A.dim) if Delta is None else Delta


def _diag_grad_A(A: np.ndarray, w: np.ndarray, tau: np.ndarray, sg: np.ndarray,
                 chunk: int = 1 << 21) -> np.ndarray:
    # open indices are the slots of A-factor 0
    T, r, n = tau.shape
    d = A.shape[0]
    V = np.indices((d,) * n).reshape(n, -1)
    N = V.shape[1]
    base = np.ones(N)
    for I in range(n):
        base = base * w[V[I]]
    G = np.zeros(d**r)
    step = max(1, chunk // N)
    for lo in range(0, T, step):
        tc = tau[lo:lo + step]
        P = np.outer(sg[lo:lo + step], base)
        for J in range(1, n):
            P *= A[tuple(V[tc[:, k, J]] for k in range(r))]
        flat = np.ravel_multi_index(tuple(V[tc[:, k, 0]] for k in range(r)), (d,) * r)
        G += np.bincount(flat.ravel(), weights=P.ravel(), minlength=d**r)
    return G.reshape((d,) * r)


def _diag_grad_Delta(A: np.ndarray, w: np.ndarray, tau: np.ndarray, sg: np.ndarray,
                     chunk: int = 1 << 21) -> np.ndarray:
    # Delta-factor 0 is removed; its r slots become free variables n-1 .. n-2+r
    T, r, n = tau.shape
    d = A.shape[0]
    nvars = n - 1 + r
    V = np.indices((d,) * nvars).reshape(nvars, -1)
    N = V.shape[1]
    base = np.ones(N)
    for I in range(n - 1):
        base = base * w[V[I]]
    slot = np.arange(r)[None, :, None]
    var = np.where(tau == 0, n - 1 + slot, tau - 1)
    acc = np.zeros(N)
    step = max(1, chunk // N)
    for lo in range(0, T, step):
        vc = var[lo:lo + step]
        P = np.broadcast_to(base, (len(vc), N)).copy()
        for J in range(n):
            P *= A[tuple(V[vc[:, k, J]] for k in range(r))]
        acc += sg[lo:lo + step] @ P
    return acc.reshape(d ** (n - 1), d**r).sum(axis=0).reshape((d,) * r)


def _leave_one_out(A: HyperMatrix, Delta: HyperMatrix, s: int, which: str,
                   cap: Optional[int]) -> np.ndarray:
    if s < 1:
        raise ValueError("s must be >= 1")
    check_pair(A, Delta)
    _check_tuple_count(A.rank, s, cap)
    w = diagonal_weights(Delta)
    d, r = A.dim, A.rank
    G = np.zeros((d,) * r)
    for _, tau, sg in iter_tuple_chunks(r, s):
        sgf = sg.astype(np.float64)
        if w is not None:
            kernel = _diag_grad_A if which == "A" else _diag_grad_Delta
            G += kernel(A.data, w, tau, sgf)
        else:
            for t in range(len(tau)):
                G += sgf[t] * einsum_term(A.data, Delta.data, tau[t],
                                          leave_A=which == "A", leave_Delta=which == "Delta")
    # degree-s homogeneity: s identical leave-one-out sums, times 1/s!
    return G / math.factorial(s - 1)


def grad_A(A: HyperMatrix, s: int, Delta: Optional[HyperMatrix] = None,
           cap: Optional[int] = None) -> HyperMatrix:
    """Formal gradient of the order-s discriminant with respect to A.

    The result carries upper indices, so it is labelled contravariant.
    """
    Delta = _unit_if_none(A, Delta)
    return HyperMatrix(_leave_one_out(A, Delta, s, "A", cap), CONTRAVARIANT)


def grad_Delta(A: HyperMatrix, Delta: Optional[HyperMatrix], s: int,
               cap: Optional[int] = None) -> HyperMatrix:
    """Formal gradient of the order-s discriminant with respect to Delta (covariant)."""
    Delta = _unit_if_none(A, Delta)
    return HyperMatrix(_leave_one_out(A, Delta, s, "Delta", cap), COVARIANT)


def full_contraction(X: HyperMatrix, Y: HyperMatrix) -> float:
    """Sum over all indices of X * Y."""
    return float(np.sum(X.data * Y.data))


# ---------------------------------------------------------------------------
# rank 2


@dataclass(frozen=True)
class CharacteristicPolynomial:
    """P(lam) = sum_k (-1)^k c_k lam^(d-k) with c_0 = 1."""

    coefficients: tuple[float, ...]

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, lam: float) -> float:
        d = self.degree
        return float(sum((-1) ** k * c * lam ** (d - k) for k, c in enumerate(self.coefficients)))

    def monomial_coefficients(self) -> list[float]:
        """Coefficients of lam^d, lam^(d-1), ..., 1 (numpy.polyval order)."""
        return [(-1) ** k * c for k, c in enumerate(self.coefficients)]


def _rank2(a: HyperMatrix) -> np.ndarray:
    if a.rank != 2:
        raise ValueError("expected a rank-2 hypermatrix")
    return a.data


def char_poly(a: HyperMatrix) -> CharacteristicPolynomial:
    """Characteristic polynomial of a matrix from its discriminants."""
    _rank2(a)
    if a.dim > 8:
        raise ValueError("dimension above 8 is not supported")
    cs = [1.0] + [discriminant_from_traces(a, k) for k in range(1, a.dim + 1)]
    return CharacteristicPolynomial(tuple(cs))


def ch_residual_rank2(a: HyperMatrix) -> HyperMatrix:
    """sum_k (-1)^k c_k a^(d-k), which vanishes identically."""
    m = _rank2(a)
    cs = char_poly(a).coefficients
    d = a.dim
    out = np.zeros_like(m)
    for k, c in enumerate(cs):
        out += (-1) ** k * c * np.linalg.matrix_power(m, d - k)
    return HyperMatrix(out)


def _check_singular(det: float, A: HyperMatrix):
    if not abs(det) > 1e-12 * A.scale() ** A.dim:
        raise SingularError(f"determinant {det:.3e} is zero within tolerance")


def inverse_rank2(a: HyperMatrix) -> HyperMatrix:
    """Inverse with upper indices, a^{ij} = (1/c_d) dc_d/da_ij.

    This is the transpose of the usual matrix inverse and satisfies
    sum_k a^{ik} a_{jk} = delta_ij.
    """
    _rank2(a)
    g = grad_A(a, a.dim)
    det = float(np.sum(g.data * a.data)) / a.dim
    _check_singular(det, a)
    return HyperMatrix(g.data / det, CONTRAVARIANT)


# ---------------------------------------------------------------------------
# epsilon route for even ranks


def _perms_starting_with(d: int):
    # for each first value x: (tails, signs) of permutations p with p[0] = x
    out = []
    for x in range(d):
        rest = [v for v in range(d) if v != x]
        tails = []
        signs = []
        for t in itertools.permutations(rest):
            tails.append(t)
            signs.append(permutation_sign((x,) + t))
        out.append((np.array(tails, dtype=np.intp).reshape(len(tails), d - 1),
                    np.array(signs, dtype=np.float64)))
    return out


def adjugate_epsilon(A: HyperMatrix) -> HyperMatrix:
    """Epsilon contraction of d-1 copies of A, divided by (d-1)!.

    For even rank, relabeling the d-1 contracted positions changes every
    epsilon by the same sign, so the first epsilon's tail can be held sorted.
    """
    r, d = A.rank, A.dim
    if r % 2:
        raise ValueError("adjugate_epsilon needs an even rank")
    if d < 2:
        raise ValueError("dimension must be >= 2")
    table = _perms_starting_with(d)
    F = math.factorial(d - 1)
    out = np.zeros((d,) * r)
    for x in itertools.product(range(d), repeat=r):
        first = np.array([v for v in range(d) if v != x[0]], dtype=np.intp)
        sign = permutation_sign((x[0],) + tuple(first))
        idx = [np.broadcast_to(first, (F,) * (r - 1) + (d - 1,))]
        sgn = np.ones((F,) * (r - 1))
        for k in range(1, r):
            tails, sg = table[x[k]]
            shape = [1] * (r - 1) + [d - 1]
            shape[k - 1] = F
            idx.append(tails.reshape(shape))
            sshape = [1] * (r - 1)
            sshape[k - 1] = F
            sgn = sgn * sg.reshape(sshape)
        vals = np.prod(A.data[tuple(idx)], axis=-1)
        out[x] = sign * float(np.sum(sgn * vals))
    return HyperMatrix(out, CONTRAVARIANT)


def det_epsilon(A: HyperMatrix) -> float:
    """Determinant of an even-rank hypermatrix through the epsilon symbols."""
    return float(np.sum(adjugate_epsilon(A).data * A.data)) / A.dim


def inverse_even_rank(A: HyperMatrix) -> HyperMatrix:
    """adjugate / det, contracting to the identity over all but the first slot."""
    adj = adjugate_epsilon(A)
    det = float(np.sum(adj.data * A.data)) / A.dim
    _check_singular(det, A)
    return HyperMatrix(adj.data / det, CONTRAVARIANT)


# ---------------------------------------------------------------------------
# Newton traces and power tensors


@dataclass(frozen=True)
class NewtonTraces:
    """t_1..t_s (rank 2) or T_1..T_s (rank 4) from the discriminants."""

    values: tuple[float, ...]
    rank: int


def _newton(c: Sequence[float], s: int) -> float:
    c1 = c[0]
    c2 = c[1] if len(c) > 1 else 0.0
    c3 = c[2] if len(c) > 2 else 0.0
    c4 = c[3] if len(c) > 3 else 0.0
    if s == 1:
        return c1
    if s == 2:
        return 0.5 * c1**2 - c2
    if s == 3:
        return c1**3 / 3 - c1 * c2 + c3
    return 0.25 * c1**4 - c1**2 * c2 + c1 * c3 + 0.5 * c2**2 - c4


def newton_traces(cs: Sequence[float], rank: int = 2) -> NewtonTraces:
    """Traces from discriminants c_1..c_s (s <= 4)."""
    if rank not in (2, 4):
        raise ValueError("rank must be 2 or 4")
    if not 1 <= len(cs) <= 4:
        raise ValueError("between 1 and 4 discriminants are supported")
    return NewtonTraces(tuple(_newton(cs, s) for s in range(1, len(cs) + 1)), rank)


def _newton_partials(c: Sequence[float], s: int) -> list[float]:
    # dT_s / dC_k for k = 1..s
    c1 = c[0]
    c2 = c[1] if len(c) > 1 else 0.0
    c3 = c[2] if len(c) > 2 else 0.0
    if s == 1:
        return [1.0]
    if s == 2:
        return [c1, -1.0]
    if s == 3:
        return [c1**2 - c2, -c1, 1.0]
    return [c1**3 - 2 * c1 * c2 + c3, c2 - c1**2, c1, -1.0]


def _power_tensors(A: HyperMatrix, Delta: HyperMatrix, s_max: int, cap: Optional[int]):
    grads = [grad_Delta(A, Delta, k, cap) for k in range(1, s_max + 1)]
    # Euler in Delta: Delta . dC_k/dDelta = k C_k
    cs = [full_contraction(Delta, g) / k for k, g in enumerate(grads, start=1)]
    powers = []
    for s in range(1, s_max + 1):
        acc = np.zeros_like(A.data)
        for coef, g in zip(_newton_partials(cs, s), grads):
            acc += coef * g.data
        powers.append(HyperMatrix(acc, COVARIANT))
    return cs, powers


def power_tensor(A: HyperMatrix, Delta: Optional[HyperMatrix], s: int,
                 cap: Optional[int] = None) -> HyperMatrix:
    """(A^s): gradient of the Newton trace T_s with respect to Delta."""
    if not 1 <= s <= 4:
        raise ValueError("s must be in 1..4")
    Delta = _unit_if_none(A, Delta)
    return _power_tensors(A, Delta, s, cap)[1][-1]


def bracket_trace(A: HyperMatrix, Delta: Optional[HyperMatrix], s: int,
                  cap: Optional[int] = None) -> float:
    """[A^s] = Delta . (A^s), equal to s * T_s."""
    Delta = _unit_if_none(A, Delta)
    return full_contraction(Delta, power_tensor(A, Delta, s, cap))


def ch_residual_rank4(A: HyperMatrix, d: Optional[int] = None,
                      cap: Optional[int] = None) -> HyperMatrix:
    """sum_k (-1)^k C_k (A^(d-k)) with (A^0) the covariant unit."""
    if A.rank != 4:
        raise ValueError("expected a rank-4 hypermatrix")
    d = A.dim if d is None else d
    if d != A.dim:
        raise ValueError("d must equal the dimension of A")
    if d > 4:
        raise ValueError("power tensors are available up to order 4")
    Delta = make_unit_delta(4, d)
    cs, powers = _power_tensors(A, Delta, d, cap)
    cs = [1.0] + cs
    powers = [make_unit_delta(4, d, COVARIANT)] + powers
    out = np.zeros_like(A.data)
    for k in range(d + 1):
        out += (-1) ** k * cs[k] * powers[d - k].data
    return HyperMatrix(out, COVARIANT)
