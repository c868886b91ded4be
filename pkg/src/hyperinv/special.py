"""Closed forms for small dimensions.

Covers the rank-4 determinant at d = 2, third-rank 2x2x2 arrays (pseudo-inverse,
quartic determinant, true inverse), Cayley's 2x2x2 hyperdeterminant by three
routes, and the vanishing epsilon contraction of odd-rank tensors.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from .calculus import SingularError
from .combinatorics import permutation_sign
from .tensor import CONTRAVARIANT, COVARIANT, HyperMatrix, make_epsilon


def _require_shape(A: HyperMatrix, rank: int, dim: int = 2):
    if A.rank != rank or A.dim != dim:
        raise ValueError(f"expected rank {rank}, dim {dim}; got rank {A.rank}, dim {A.dim}")


def _require_symmetric(A: HyperMatrix):
    if not A.is_symmetric(1e-12):
        raise ValueError("input must be symmetric")


def det_rank4_d2(A: HyperMatrix) -> float:
    """Eight-term determinant of a 2x2x2x2 hypermatrix."""
    _require_shape(A, 4)
    a = A.data
    return float(
        a[0, 0, 0, 0] * a[1, 1, 1, 1]
        - (a[0, 0, 0, 1] * a[1, 1, 1, 0] + a[0, 0, 1, 0] * a[1, 1, 0, 1]
           + a[0, 1, 0, 0] * a[1, 0, 1, 1] + a[1, 0, 0, 0] * a[0, 1, 1, 1])
        + (a[0, 0, 1, 1] * a[1, 1, 0, 0] + a[0, 1, 0, 1] * a[1, 0, 1, 0]
           + a[1, 0, 0, 1] * a[0, 1, 1, 0])
    )


def c2_sym_rank4_d2(G: HyperMatrix) -> float:
    """G_0000 G_1111 - 4 G_0001 G_0111 + 3 G_0011^2 for symmetric G."""
    _require_shape(G, 4)
    _require_symmetric(G)
    g = G.data
    return float(g[0, 0, 0, 0] * g[1, 1, 1, 1] - 4 * g[0, 0, 0, 1] * g[0, 1, 1, 1] + 3 * g[0, 0, 1, 1] ** 2)


def rank4_order2_patterns(G: HyperMatrix, Delta: HyperMatrix | None = None) -> dict:
    """Covariant tensors of the three order-2 square classes of a rank-4 G.

    Keys are the class labels ``"40"``, ``"31"`` and ``"22"``:
    (Delta.G) G, sym(G_aijk Delta^ijkl G_lbcd) and sym(G_abij Delta^ijkl G_klcd).
    """
    from .tensor import make_unit_delta, symmetrize

    if G.rank != 4:
        raise ValueError("expected a rank-4 hypermatrix")
    D = make_unit_delta(4, G.dim).data if Delta is None else Delta.data
    g = G.data
    p40 = np.sum(D * g) * g
    p31 = np.einsum("aijk,ijkl,lbcd->abcd", g, D, g)
    p22 = np.einsum("abij,ijkl,klcd->abcd", g, D, g)
    return {
        "40": HyperMatrix(p40, COVARIANT),
        "31": symmetrize(HyperMatrix(p31, COVARIANT)),
        "22": symmetrize(HyperMatrix(p22, COVARIANT)),
    }


# ---------------------------------------------------------------------------
# third rank, d = 2


def thirdrank_discriminants_d2(a: HyperMatrix) -> tuple[float, float]:
    """(C1, C2) of a 2x2x2 array with the mixed products weighted by 1/3."""
    _require_shape(a, 3)
    x = a.data
    c1 = x[0, 0, 0] + x[1, 1, 1]
    c2 = x[0, 0, 0] * x[1, 1, 1] - (x[0, 0, 1] * x[1, 1, 0] + x[0, 1, 0] * x[1, 0, 1] + x[1, 0, 0] * x[0, 1, 1]) / 3
    return float(c1), float(c2)


def _c2_gradient(x: np.ndarray) -> np.ndarray:
    g = np.zeros((2, 2, 2))
    g[0, 0, 0] = x[1, 1, 1]
    g[1, 1, 1] = x[0, 0, 0]
    for i, j, k in [(0, 0, 1), (0, 1, 0), (1, 0, 0), (1, 1, 0), (1, 0, 1), (0, 1, 1)]:
        g[i, j, k] = -x[1 - i, 1 - j, 1 - k] / 3
    return g


def _contract_first(inv: np.ndarray, a: np.ndarray) -> np.ndarray:
    # m[i, j] = inv^{i k1 k2} a_{j k1 k2}
    return np.einsum("ikl,jkl->ij", inv, a)


def thirdrank_pseudo_inverse(a: HyperMatrix) -> tuple[HyperMatrix, float]:
    """Gradient of C2 over C2, and how far it is from a two-sided inverse.

    The defect is max |inv^{i k l} a_{j k l} - delta_ij|.  It is generically
    nonzero: the diagonal entries come out as 1 but the off-diagonal ones do not
    vanish.
    """
    _require_shape(a, 3)
    _require_symmetric(a)
    _, c2 = thirdrank_discriminants_d2(a)
    if not abs(c2) > 1e-12 * a.scale() ** 2:
        raise SingularError("C2 vanishes within tolerance")
    inv = _c2_gradient(a.data) / c2
    defect = float(np.max(np.abs(_contract_first(inv, a.data) - np.eye(2))))
    return HyperMatrix(inv, CONTRAVARIANT), defect


def _quartic_parts(a: HyperMatrix):
    x = a.data
    a0, a1 = x[0, 0, 0], x[1, 1, 1]
    p = (x[0, 0, 1] + x[0, 1, 0] + x[1, 0, 0]) / 3
    q = (x[0, 1, 1] + x[1, 0, 1] + x[1, 1, 0]) / 3
    return a0, a1, p, q


def _quartic_bracket(a0, a1, p, q):
    return a0**2 * a1**2 - 6 * a0 * p * q * a1 + 4 * a0 * q**3 + 4 * a1 * p**3 - 3 * p**2 * q**2


def thirdrank_det_d2(a: HyperMatrix) -> float:
    """Quartic determinant of a symmetric 2x2x2 array, normalised by 1/18.

    With this normalisation 18 times the value equals Cayley's hyperdeterminant.
    """
    _require_shape(a, 3)
    _require_symmetric(a)
    return float(_quartic_bracket(*_quartic_parts(a)) / 18)


def thirdrank_inverse_d2(a: HyperMatrix) -> HyperMatrix:
    """a^{ijk} = (1/(2 det)) d det / d a_ijk, a true inverse over two slots.

    The factor 1/2 comes from Euler's identity for the quartic: the full
    contraction of the gradient with a equals 4 det, while the inverse must
    contract to the trace of the 2x2 identity, which is 2.
    """
    _require_shape(a, 3)
    _require_symmetric(a)
    a0, a1, p, q = _quartic_parts(a)
    B = _quartic_bracket(a0, a1, p, q)
    if not abs(B) > 18 * 1e-12 * a.scale() ** 4:
        raise SingularError("determinant vanishes within tolerance")
    dB = {
        "a0": 2 * a0 * a1**2 - 6 * p * q * a1 + 4 * q**3,
        "a1": 2 * a0**2 * a1 - 6 * a0 * p * q + 4 * p**3,
        "p": -6 * a0 * q * a1 + 12 * a1 * p**2 - 6 * p * q**2,
        "q": -6 * a0 * p * a1 + 12 * a0 * q**2 - 6 * p**2 * q,
    }
    inv = np.empty((2, 2, 2))
    for idx in itertools.product(range(2), repeat=3):
        ones = sum(idx)
        if ones == 0:
            g = dB["a0"]
        elif ones == 3:
            g = dB["a1"]
        elif ones == 1:
            g = dB["p"] / 3
        else:
            g = dB["q"] / 3
        inv[idx] = g / (2 * B)
    return HyperMatrix(inv, CONTRAVARIANT)


def odd_rank_epsilon_det(a: HyperMatrix) -> float:
    """(1/d!) times the full epsilon contraction of d copies of a.

    Summed term by term over all (d!)^r permutation choices with no
    simplification, so that the cancellation to zero for odd rank is observed
    rather than assumed.
    """
    r, d = a.rank, a.dim
    if r % 2 == 0:
        raise ValueError("odd_rank_epsilon_det needs an odd rank")
    perms = np.array(list(itertools.permutations(range(d))), dtype=np.intp)
    signs = np.array([permutation_sign(p) for p in perms], dtype=np.float64)
    F = len(perms)
    idx = []
    sgn = np.ones((F,) * r)
    for k in range(r):
        shape = [1] * r + [d]
        shape[k] = F
        idx.append(perms.reshape(shape))
        sshape = [1] * r
        sshape[k] = F
        sgn = sgn * signs.reshape(sshape)
    vals = np.prod(a.data[tuple(idx)], axis=-1)
    return float(np.sum(sgn * vals)) / math.factorial(d)


# ---------------------------------------------------------------------------
# Cayley's hyperdeterminant


def cayley_hyperdet(a: HyperMatrix) -> float:
    """Cayley's quartic hyperdeterminant of a general 2x2x2 array."""
    _require_shape(a, 3)
    x = a.data
    a000, a001, a010, a011 = x[0, 0, 0], x[0, 0, 1], x[0, 1, 0], x[0, 1, 1]
    a100, a101, a110, a111 = x[1, 0, 0], x[1, 0, 1], x[1, 1, 0], x[1, 1, 1]
    return float(
        a000**2 * a111**2 + a001**2 * a110**2 + a010**2 * a101**2 + a100**2 * a011**2
        - 2 * (a000 * a111 * (a001 * a110 + a010 * a101 + a100 * a011)
               + a001 * a010 * a101 * a110 + a001 * a011 * a110 * a100 + a010 * a011 * a101 * a100)
        + 4 * (a000 * a011 * a101 * a110 + a001 * a010 * a100 * a111)
    )


def g_matrix(a: HyperMatrix) -> tuple[HyperMatrix, float]:
    """g_ij = a_ikm a_jln eps^kl eps^mn and its determinant (which is -C)."""
    _require_shape(a, 3)
    e = make_epsilon(2).data
    g = np.einsum("ikm,jln,kl,mn->ij", a.data, a.data, e, e)
    return HyperMatrix(g, COVARIANT), float(g[0, 0] * g[1, 1] - g[0, 1] ** 2)


def sixth_rank_embed(a: HyperMatrix) -> HyperMatrix:
    """Rank-6 tensor built from two copies of a 2x2x2 array.

    A_{i1 j1 k1 i2 j2 k2} averages a_{i1j1k1} a_{i2j2k2} over the four pairings
    obtained by swapping at most one slot between the two factors.
    """
    _require_shape(a, 3)
    x = a.data
    t = np.einsum("abc,def->abcdef", x, x)
    out = (t
           + t.transpose(0, 1, 5, 3, 4, 2)
           + t.transpose(0, 4, 2, 3, 1, 5)
           + t.transpose(3, 1, 2, 0, 4, 5)) / 4
    return HyperMatrix(out, COVARIANT)


def _complement_terms(A6: HyperMatrix):
    x = A6.data
    for idx in itertools.product(range(2), repeat=6):
        comp = tuple(1 - v for v in idx)
        yield (-1) ** sum(idx), x[idx] * x[comp]


def sixth_rank_det_d2(A6: HyperMatrix) -> float:
    """(1/2!) times the six-epsilon contraction of two copies of A6."""
    _require_shape(A6, 6)
    return float(0.5 * sum(s * v for s, v in _complement_terms(A6)))


def sixth_rank_det_d2_expanded(A6: HyperMatrix) -> float:
    """Same value as :func:`sixth_rank_det_d2` written as 32 complementary pairs.

    Each pair (x, 1-x) with x_0 = 0 appears once with sign (-1)^|x|.
    """
    _require_shape(A6, 6)
    x = A6.data
    total = 0.0
    for idx in itertools.product(range(2), repeat=5):
        full = (0,) + idx
        comp = tuple(1 - v for v in full)
        total += (-1) ** sum(full) * x[full] * x[comp]
    return float(total)
