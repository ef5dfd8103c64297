"""Structured matrix families with pinned inertia.

Each builder returns a :class:`~inertia_lab.linalg.SymMatrix` whose eigenvalue
sign pattern is known in closed form; the test suite checks those facts
against an independent eigensolver.  The harness uses these families both to
sample class members and to manufacture witnesses against false negativity
claims.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .errors import ConfigError
from .linalg import SymMatrix, direct_sum, inertia

__all__ = [
    "block_pair",
    "replicated_block",
    "vandermonde_psd",
    "two_by_two_pair",
    "ones_orthogonal_basis",
    "ones_spike",
    "equicorrelation",
    "embed_with_negatives",
    "weight_matrix",
    "inflate",
    "lift_finite",
    "pencil_base",
    "ones_pencil",
]


def block_pair(A: SymMatrix, B: SymMatrix) -> SymMatrix:
    """The 2n x 2n block matrix [[A, B], [B, A]].

    It is orthogonally congruent to (A + B) (+) (A - B), so its inertia is the
    componentwise sum of the inertias of A + B and A - B.
    """
    if A.n != B.n:
        raise ConfigError("block_pair needs two matrices of one size")
    n = A.n
    out = np.empty((2 * n, 2 * n))
    out[:n, :n] = A.entries
    out[n:, n:] = A.entries
    out[:n, n:] = B.entries
    out[n:, :n] = B.entries
    return SymMatrix(out)


def replicated_block(A: SymMatrix, k: int, l: int, t0: float) -> SymMatrix:
    """(-t0 Id_k) (+) A^(+(l+2)): k pinned negatives plus l+2 copies of A."""
    if not isinstance(k, int) or k < 1:
        raise ConfigError("k must be a positive int")
    if not isinstance(l, int) or l < 0:
        raise ConfigError("l must be a nonnegative int")
    if not (t0 > 0.0 and math.isfinite(t0)):
        raise ConfigError("t0 must be a positive finite float")
    blocks = [SymMatrix(-t0 * np.eye(k))]
    blocks.extend([A] * (l + 2))
    return direct_sum(blocks)


def vandermonde_psd(k: int, t0: float, u: Sequence[float] | None = None) -> SymMatrix:
    """PSD moment matrix t0 * sum_{j<k} (u^j)(u^j)^T on 2k-1 distinct nodes.

    Rank is exactly k (Vandermonde columns on distinct positive nodes), while
    entrywise squaring pushes the rank up to min(2k-1, k(k+1)/2).  Defaults to
    equispaced nodes u_i = (i + 1) / (2k) in (0, 1).
    """
    if not isinstance(k, int) or k < 1:
        raise ConfigError("k must be a positive int")
    if not (t0 > 0.0 and math.isfinite(t0)):
        raise ConfigError("t0 must be a positive finite float")
    size = 2 * k - 1
    if u is None:
        u = [(i + 1) / (2 * k) for i in range(size)]
    u_arr = np.array([float(v) for v in u])
    if u_arr.shape != (size,):
        raise ConfigError(f"u must have {size} components")
    if not np.all(u_arr > 0.0) or len(set(u_arr.tolist())) != size:
        raise ConfigError("u must consist of distinct positive values")
    out = np.zeros((size, size))
    for j in range(k):
        col = u_arr**j
        out += np.outer(col, col)
    return SymMatrix(t0 * out)


def two_by_two_pair(t0: float) -> tuple[SymMatrix, SymMatrix]:
    """The ordered pair A = t0*[[1,2],[2,4]], B = t0*[[2,3],[3,5]].

    B - A is the all-ones rank-one matrix times t0, while B^(j) - A^(j)
    (entrywise powers) is positive definite for every j >= 2: its determinant
    expands to t0^(2j) * (10^j - 9^j - 8^j + 6^j + 6^j - 5^j) > 0.
    """
    if not (t0 > 0.0 and math.isfinite(t0)):
        raise ConfigError("t0 must be a positive finite float")
    a = SymMatrix(t0 * np.array([[1.0, 2.0], [2.0, 4.0]]))
    b = SymMatrix(t0 * np.array([[2.0, 3.0], [3.0, 5.0]]))
    return a, b


def ones_orthogonal_basis(size: int) -> np.ndarray:
    """Rows: the all-ones vector followed by the classical ones-orthogonal
    completion v_j = (1, ..., 1, -(j-1), 0, ..., 0) with ||v_j||^2 = (j-1)j."""
    if not isinstance(size, int) or size < 1:
        raise ConfigError("size must be a positive int")
    basis = np.zeros((size, size))
    basis[0] = 1.0
    for j in range(2, size + 1):
        basis[j - 1, : j - 1] = 1.0
        basis[j - 1, j - 1] = -(j - 1)
    return basis


def ones_spike(k: int, delta: float, epsilon: float) -> SymMatrix:
    """delta * ones - epsilon * (projection complement of the ones line).

    Size k+1; eigenvalues are (k+1) * delta on the ones direction and
    -epsilon * (j-1) * j on the ones-orthogonal completion vectors, so the
    inertia is (k, 0, 1).
    """
    if not isinstance(k, int) or k < 1:
        raise ConfigError("k must be a positive int")
    if not (delta > 0.0 and math.isfinite(delta)):
        raise ConfigError("delta must be a positive finite float")
    if not (epsilon > 0.0 and math.isfinite(epsilon)):
        raise ConfigError("epsilon must be a positive finite float")
    n = k + 1
    basis = ones_orthogonal_basis(n)
    out = delta * np.ones((n, n))
    for j in range(1, n):
        v = basis[j]
        out -= epsilon * np.outer(v, v)
    return SymMatrix(out)


def equicorrelation(k: int, a: float, b: float) -> SymMatrix:
    """(a - b) Id + b * ones of size k+1, with 0 <= a < b.

    Eigenvalues: a + k*b once (ones direction) and a - b < 0 with
    multiplicity k, so the matrix has exactly k negative eigenvalues while
    all entries stay nonnegative.
    """
    if not isinstance(k, int) or k < 1:
        raise ConfigError("k must be a positive int")
    a = float(a)
    b = float(b)
    if not (math.isfinite(a) and math.isfinite(b) and 0.0 <= a < b):
        raise ConfigError("need 0 <= a < b")
    n = k + 1
    return SymMatrix((a - b) * np.eye(n) + b * np.ones((n, n)))


def embed_with_negatives(
    a: float, b: float, k: int, epsilon: float, B: SymMatrix
) -> SymMatrix:
    """(equicorrelation(k, a, b) (+) B) + epsilon * ones.

    For PSD ``B`` the result has exactly k negative eigenvalues, all equal to
    a - b: vectors supported on the equicorrelation block and orthogonal to
    the ones vector are untouched by both the direct sum and the rank-one
    shift, while the complementary subspace carries a PSD form.
    """
    a = float(a)
    b = float(b)
    epsilon = float(epsilon)
    if not (math.isfinite(epsilon) and epsilon >= 0.0):
        raise ConfigError("epsilon must be finite and >= 0")
    core = equicorrelation(k, a, b)  # validates k, a, b
    if inertia(B).n_neg:
        raise ConfigError("the embedded block must be positive semidefinite")
    joined = direct_sum([core, B])
    n = joined.n
    return SymMatrix(joined.entries + epsilon * np.ones((n, n)))


def _check_partition(partition: Sequence[Sequence[int]], n: int) -> list[list[int]]:
    blocks = [list(block) for block in partition]
    seen: set[int] = set()
    for block in blocks:
        if not block:
            raise ConfigError("partition blocks must be nonempty")
        for i in block:
            if not isinstance(i, int) or isinstance(i, bool) or not 0 <= i < n:
                raise ConfigError(f"partition index {i!r} out of range 0..{n - 1}")
            if i in seen:
                raise ConfigError(f"partition index {i} repeated")
            seen.add(i)
    if len(seen) != n:
        raise ConfigError("partition must cover every index exactly once")
    return blocks


def weight_matrix(partition: Sequence[Sequence[int]], n: int) -> np.ndarray:
    """0/1 matrix W with W[i, j] = 1 iff index i lies in block j.

    Columns are disjoint indicators, so W^T W = diag(block sizes).
    """
    blocks = _check_partition(partition, n)
    w = np.zeros((n, len(blocks)))
    for j, block in enumerate(blocks):
        for i in block:
            w[i, j] = 1.0
    return w


def inflate(A: SymMatrix, partition: Sequence[Sequence[int]]) -> SymMatrix:
    """Blow A up by repeating entry (r, s) over block r x block s.

    With W the partition weight matrix this is W A W^T.  W has full column
    rank, so the counts of negative and positive eigenvalues are preserved
    and only zeros are added.
    """
    blocks_flat = [i for block in partition for i in block]
    n = len(blocks_flat)
    blocks = _check_partition(partition, n)
    if len(blocks) != A.n:
        raise ConfigError(f"partition has {len(blocks)} blocks, matrix has size {A.n}")
    w = weight_matrix(blocks, n)
    return SymMatrix(w @ A.entries @ w.T)


def lift_finite(A: SymMatrix, N: int) -> SymMatrix:
    """Replicate the last row/column of A until the size reaches N."""
    if not isinstance(N, int) or N < A.n:
        raise ConfigError(f"target size must be an int >= {A.n}")
    n = A.n
    partition = [[i] for i in range(n - 1)] + [list(range(n - 1, N))]
    return inflate(A, partition)


def pencil_base() -> SymMatrix:
    """A fixed 3x3 matrix with entries in (0, 5) and exactly one negative
    eigenvalue; its characteristic polynomial factors as
    (x - 1)(x^2 - 8x - 1), giving eigenvalues 4 - sqrt(17), 1, 4 + sqrt(17).
    """
    return SymMatrix([[4.0, 2.0, 3.0], [2.0, 1.0, 2.0], [3.0, 2.0, 4.0]])


def ones_pencil(k: int, t: float) -> SymMatrix:
    """pencil_base^(+k) + t * ones, size 3k.

    The all-ones shift couples the k copies: for t > 1 the pencil has exactly
    k - 1 negative eigenvalues (one fewer than the unshifted direct sum), a
    count that is independent of the magnitude of t beyond the threshold.
    """
    if not isinstance(k, int) or k < 1:
        raise ConfigError("k must be a positive int")
    t = float(t)
    if not math.isfinite(t):
        raise ConfigError("t must be finite")
    base = pencil_base()
    stacked = direct_sum([base] * k)
    n = 3 * k
    return SymMatrix(stacked.entries + t * np.ones((n, n)))
