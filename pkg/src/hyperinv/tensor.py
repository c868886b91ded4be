"""Dense hypermatrices, structural tensors and the contraction kernel."""

from __future__ import annotations

import itertools
import math
from typing import Callable, Optional, Sequence

import numpy as np

from .combinatorics import inverse_permutation, permutation_sign

COVARIANT = "covariant"
CONTRAVARIANT = "contravariant"
_VARIANCES = (COVARIANT, CONTRAVARIANT)


class HyperMatrix:
    """Immutable rank-r array with every index running over ``range(dim)``.

    ``data`` is always the full dense ``dim**rank`` array in float64, even
    when the tensor is symmetric.  ``variance`` is a label only; it decides
    which similarity transform applies.
    """

    __slots__ = ("_data", "_variance")

    def __init__(self, data, variance: str = COVARIANT):
        arr = np.array(data, dtype=np.float64, copy=True)
        if arr.ndim < 1:
            raise ValueError("rank must be >= 1")
        if len(set(arr.shape)) != 1 or arr.shape[0] < 1:
            raise ValueError(f"all {arr.ndim} axes must have the same positive length, got {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("entries must be finite")
        if variance not in _VARIANCES:
            raise ValueError(f"variance must be one of {_VARIANCES}")
        arr.setflags(write=False)
        self._data = arr
        self._variance = variance

    @classmethod
    def from_flat(cls, rank: int, dim: int, values, variance: str = COVARIANT) -> "HyperMatrix":
        """Build from a row-major flat list (last index varies fastest)."""
        values = np.asarray(values, dtype=np.float64)
        if values.size != dim**rank:
            raise ValueError(f"expected {dim**rank} values for rank {rank}, dim {dim}, got {values.size}")
        return cls(values.reshape((dim,) * rank), variance)

    @property
    def data(self) -> np.ndarray:
        return self._data

    @property
    def variance(self) -> str:
        return self._variance

    @property
    def rank(self) -> int:
        return self._data.ndim

    @property
    def dim(self) -> int:
        return self._data.shape[0]

    @property
    def flat(self) -> np.ndarray:
        return self._data.ravel()

    def scale(self) -> float:
        """Largest absolute entry, used for relative tolerances."""
        return float(np.max(np.abs(self._data)))

    def with_variance(self, variance: str) -> "HyperMatrix":
        return HyperMatrix(self._data, variance)

    def is_symmetric(self, rtol: float = 1e-12) -> bool:
        tol = rtol * max(1.0, self.scale())
        return bool(np.max(np.abs(symmetrize(self).data - self._data)) <= tol)

    def __array__(self, dtype=None, copy=None):
        return self._data if dtype is None else self._data.astype(dtype)

    def __eq__(self, other):
        if not isinstance(other, HyperMatrix):
            return NotImplemented
        return self._variance == other._variance and np.array_equal(self._data, other._data)

    def __hash__(self):
        return hash((self._variance, self._data.shape, self._data.tobytes()))

    def __mul__(self, factor):
        return HyperMatrix(self._data * factor, self._variance)

    __rmul__ = __mul__

    def __repr__(self):
        return f"HyperMatrix(rank={self.rank}, dim={self.dim}, variance={self._variance!r})"


class MatrixTransform:
    """Invertible d x d matrix used for similarity transforms."""

    __slots__ = ("_entries", "_inverse")

    def __init__(self, entries):
        m = np.array(entries, dtype=np.float64, copy=True)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("transform must be a square matrix")
        d = m.shape[0]
        scale = float(np.max(np.abs(m))) if m.size else 0.0
        det = float(np.linalg.det(m))
        if not abs(det) > 1e-12 * scale**d:
            raise ValueError(f"transform is singular or nearly so (det={det:.3e})")
        m.setflags(write=False)
        inv = np.linalg.inv(m)
        inv.setflags(write=False)
        self._entries = m
        self._inverse = inv

    @property
    def dim(self) -> int:
        return self._entries.shape[0]

    @property
    def entries(self) -> np.ndarray:
        return self._entries

    @property
    def inverse(self) -> np.ndarray:
        return self._inverse


def make_unit_delta(rank: int, dim: int, variance: str = CONTRAVARIANT) -> HyperMatrix:
    """1 where all indices coincide, 0 elsewhere."""
    if rank < 1 or dim < 1:
        raise ValueError("rank and dim must be >= 1")
    data = np.zeros((dim,) * rank)
    for i in range(dim):
        data[(i,) * rank] = 1.0
    return HyperMatrix(data, variance)


def make_epsilon(dim: int) -> HyperMatrix:
    """Levi-Civita symbol of rank ``dim`` with eps[0, 1, ..., dim-1] = +1."""
    if dim < 1:
        raise ValueError("dim must be >= 1")
    data = np.zeros((dim,) * dim)
    for p in itertools.permutations(range(dim)):
        data[p] = permutation_sign(p)
    return HyperMatrix(data, CONTRAVARIANT)


def symmetrize(A: HyperMatrix) -> HyperMatrix:
    """Average over all permutations of the index slots.

    Entries related by a slot permutation come out bitwise equal: each one is
    the sum of the same values, sorted before adding.
    """
    r = A.rank
    stack = np.stack([A.data.transpose(p) for p in itertools.permutations(range(r))])
    acc = np.sort(stack, axis=0).sum(axis=0)
    return HyperMatrix(acc / math.factorial(r), A.variance)


def _check_dims(A: HyperMatrix, U: MatrixTransform):
    if A.dim != U.dim:
        raise ValueError(f"dimension mismatch: tensor {A.dim}, transform {U.dim}")


def transform_covariant(A: HyperMatrix, U: MatrixTransform) -> HyperMatrix:
    """A'_{i...} = A_{j...} U[j, i] ... with one factor of U per slot."""
    _check_dims(A, U)
    out = A.data
    for k in range(A.rank):
        out = np.moveaxis(np.tensordot(out, U.entries, axes=([k], [0])), -1, k)
    return HyperMatrix(out, A.variance)


def transform_contravariant(B: HyperMatrix, U: MatrixTransform) -> HyperMatrix:
    """B'^{i...} = Uinv[i, j] ... B^{j...}, the dual of :func:`transform_covariant`."""
    _check_dims(B, U)
    out = B.data
    for k in range(B.rank):
        out = np.moveaxis(np.tensordot(U.inverse, out, axes=([1], [k])), 0, k)
    return HyperMatrix(out, B.variance)


def diagonal_weights(Delta: HyperMatrix) -> Optional[np.ndarray]:
    """Diagonal values of ``Delta`` if it vanishes off the all-equal diagonal."""
    d, r = Delta.dim, Delta.rank
    w = np.array([Delta.data[(i,) * r] for i in range(d)])
    diag = np.zeros_like(Delta.data)
    for i in range(d):
        diag[(i,) * r] = w[i]
    if np.array_equal(diag, Delta.data):
        return w
    return None


def tuple_perms(t) -> tuple[tuple[int, ...], ...]:
    """Accept either a PermutationTuple-like object or a sequence of perms."""
    perms = getattr(t, "perms", t)
    return tuple(tuple(int(x) for x in p) for p in perms)


def check_pair(A: HyperMatrix, Delta: HyperMatrix):
    if A.variance != COVARIANT or Delta.variance != CONTRAVARIANT:
        raise ValueError("expected a covariant A and a contravariant Delta")
    if A.rank != Delta.rank or A.dim != Delta.dim:
        raise ValueError(
            f"rank/dim mismatch: A is rank {A.rank} dim {A.dim}, Delta is rank {Delta.rank} dim {Delta.dim}"
        )


def wiring(perms: Sequence[Sequence[int]], r: int) -> np.ndarray:
    """Index map ``tau[k, J]``: slot k of A-factor J meets Delta-factor tau[k, J].

    Slot 1 uses the identity, slot k uses the inverse of the (k-1)-th
    permutation of the tuple.
    """
    if len(perms) != r - 1:
        raise ValueError(f"rank {r} needs {r - 1} permutations, got {len(perms)}")
    n = len(perms[0]) if perms else None
    if n is None:
        raise ValueError("rank 1 contractions are not supported")
    taus = [tuple(range(n))]
    for p in perms:
        if sorted(p) != list(range(n)):
            raise ValueError(f"{p} is not a permutation of range({n})")
        taus.append(inverse_permutation(p))
    return np.array(taus, dtype=np.intp)


def tuple_sign(perms: Sequence[Sequence[int]]) -> int:
    s = 1
    for p in perms:
        s *= permutation_sign(p)
    return s


def contract_tuple(A: HyperMatrix, Delta: HyperMatrix, t) -> float:
    """Unsigned value of one permutation-tuple term.

    Delta-factor I has its slot k joined to slot k of A-factor sigma_k(I).
    The sign of the tuple is not applied.
    """
    check_pair(A, Delta)
    perms = tuple_perms(t)
    tau = wiring(perms, A.rank)
    w = diagonal_weights(Delta)
    if w is not None:
        return float(diagonal_kernel(A.data, w, tau[None], np.ones(1))[0])
    return float(einsum_term(A.data, Delta.data, tau))


def diagonal_kernel(A: np.ndarray, w: np.ndarray, taus: np.ndarray, signs: np.ndarray,
                    chunk: int = 1 << 21) -> np.ndarray:
    """Per-tuple values for a diagonal Delta with weights ``w``.

    ``taus`` has shape (T, r, n).  Returns an array of T values, each already
    multiplied by its entry of ``signs``.
    """
    T, r, n = taus.shape
    d = A.shape[0]
    V = np.indices((d,) * n).reshape(n, -1)
    base = np.ones(V.shape[1])
    for I in range(n):
        base = base * w[V[I]]
    out = np.empty(T)
    step = max(1, chunk // V.shape[1])
    for lo in range(0, T, step):
        tc = taus[lo:lo + step]
        P = np.broadcast_to(base, (len(tc), V.shape[1])).copy()
        for J in range(n):
            P *= A[tuple(V[tc[:, k, J]] for k in range(r))]
        out[lo:lo + step] = P.sum(axis=1)
    return out * signs


def einsum_term(A: np.ndarray, D: np.ndarray, tau: np.ndarray, leave_A: bool = False,
                leave_Delta: bool = False):
    """Generic contraction of one tuple term for an arbitrary Delta.

    With ``leave_A`` the A-factor 0 is omitted and the open indices are its r
    slots; with ``leave_Delta`` the Delta-factor 0 is omitted instead.
    """
    r, n = tau.shape
    operands = []
    for I in range(n):
        if leave_Delta and I == 0:
            continue
        operands += [D, [I * r + k for k in range(r)]]
    for J in range(n):
        if leave_A and J == 0:
            continue
        operands += [A, [int(tau[k, J]) * r + k for k in range(r)]]
    if leave_A:
        out = [int(tau[k, 0]) * r + k for k in range(r)]
    elif leave_Delta:
        out = list(range(r))
    else:
        out = []
    return np.einsum(*operands, out, optimize=True)


def fd_gradient(f: Callable[[HyperMatrix], float], A: HyperMatrix, h: float = 1e-5) -> HyperMatrix:
    """Central-difference gradient of ``f`` with respect to every entry of A."""
    if h <= 0:
        raise ValueError("h must be positive")
    grad = np.zeros(A.data.size)
    base = A.data.ravel()
    for idx in range(base.size):
        up = base.copy()
        dn = base.copy()
        up[idx] += h
        dn[idx] -= h
        fu = f(HyperMatrix(up.reshape(A.data.shape), A.variance))
        fd = f(HyperMatrix(dn.reshape(A.data.shape), A.variance))
        grad[idx] = (fu - fd) / (2 * h)
    return HyperMatrix(grad.reshape(A.data.shape), A.variance)
