"""Tolerance-aware dense linear algebra helpers.

Everything operates on plain numpy arrays (float64 or complex128) at desk
scale. Rank decisions are relative: a singular value (or pivot) counts only
if it exceeds ``rank_eps`` times the largest one, so the zero matrix has
rank 0 and scaling a matrix never changes its rank.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import scipy.linalg

__all__ = [
    "Tolerance",
    "DEFAULT_TOL",
    "QRPivot",
    "LeastSquares",
    "rank",
    "qr_column_pivot",
    "null_space",
    "column_space",
    "least_squares",
    "sym_eig",
]


@dataclass(frozen=True)
class Tolerance:
    """Numerical thresholds shared across the toolkit.

    rank_eps: relative cutoff for rank decisions (singular values, pivots).
    residual_eps: threshold for residual/membership/equality tests.
    """

    rank_eps: float = 1e-10
    residual_eps: float = 1e-8

    def __post_init__(self) -> None:
        if not 0.0 < self.rank_eps < 1.0:
            raise ValueError(f"rank_eps must lie in (0, 1), got {self.rank_eps}")
        if self.residual_eps <= 0.0:
            raise ValueError(f"residual_eps must be positive, got {self.residual_eps}")


DEFAULT_TOL = Tolerance()


def as_matrix(a) -> np.ndarray:
    """Coerce input to a 2-d float64 or complex128 array with finite entries."""
    arr = np.asarray(a)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-d array, got shape {arr.shape}")
    if np.iscomplexobj(arr):
        arr = arr.astype(np.complex128, copy=False)
    else:
        arr = arr.astype(np.float64, copy=False)
    if arr.size and not np.all(np.isfinite(arr)):
        raise ValueError("matrix entries must be finite")
    return arr


def as_vector(x) -> np.ndarray:
    """Coerce input to a 1-d float64 or complex128 array with finite entries."""
    arr = np.asarray(x)
    if arr.ndim != 1:
        raise ValueError(f"expected a 1-d array, got shape {arr.shape}")
    if np.iscomplexobj(arr):
        arr = arr.astype(np.complex128, copy=False)
    else:
        arr = arr.astype(np.float64, copy=False)
    if arr.size and not np.all(np.isfinite(arr)):
        raise ValueError("vector entries must be finite")
    return arr


def rank(a, tol: Tolerance = DEFAULT_TOL) -> int:
    """Numerical rank: singular values above rank_eps * (largest one)."""
    arr = as_matrix(a)
    if arr.size == 0:
        return 0
    s = np.linalg.svd(arr, compute_uv=False)
    if s.size == 0 or s[0] <= 0.0:
        return 0
    return int(np.count_nonzero(s > tol.rank_eps * s[0]))


class QRPivot(NamedTuple):
    q: np.ndarray
    r: np.ndarray
    perm: np.ndarray
    rank: int


def qr_column_pivot(a, tol: Tolerance = DEFAULT_TOL) -> QRPivot:
    """Column-pivoted QR factorization with a rank estimate.

    Returns (q, r, perm, rank) with a[:, perm] == q @ r, q having
    orthonormal columns, and rank counting the diagonal entries of r that
    exceed rank_eps times |r[0, 0]|.
    """
    arr = as_matrix(a)
    if arr.shape[0] == 0 or arr.shape[1] == 0:
        raise ValueError("qr_column_pivot needs a nonempty matrix")
    q, r, perm = scipy.linalg.qr(arr, mode="economic", pivoting=True)
    diag = np.abs(np.diag(r))
    if diag.size == 0 or diag[0] <= 0.0:
        rk = 0
    else:
        rk = int(np.count_nonzero(diag > tol.rank_eps * diag[0]))
    return QRPivot(q, r, perm, rk)


def null_space(a, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis (columns) of the null space of ``a``.

    The returned matrix has shape (cols, cols - rank); it is empty when the
    matrix has full column rank.
    """
    arr = as_matrix(a)
    n_cols = arr.shape[1]
    if n_cols == 0:
        raise ValueError("null_space needs at least one column")
    if arr.shape[0] == 0:
        return np.eye(n_cols, dtype=arr.dtype)
    _, s, vh = np.linalg.svd(arr, full_matrices=True)
    if s.size == 0 or s[0] <= 0.0:
        rk = 0
    else:
        rk = int(np.count_nonzero(s > tol.rank_eps * s[0]))
    return vh[rk:].conj().T


def column_space(a, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis (columns) of the column space of ``a``."""
    arr = as_matrix(a)
    if arr.shape[0] == 0 or arr.shape[1] == 0:
        raise ValueError("column_space needs a nonempty matrix")
    u, s, _ = np.linalg.svd(arr, full_matrices=False)
    if s.size == 0 or s[0] <= 0.0:
        rk = 0
    else:
        rk = int(np.count_nonzero(s > tol.rank_eps * s[0]))
    return u[:, :rk]


class LeastSquares(NamedTuple):
    x: np.ndarray
    residual: float
    degenerate: bool


def least_squares(a, b, tol: Tolerance = DEFAULT_TOL) -> LeastSquares:
    """Minimize ||a @ x - b||, returning the minimum-norm minimizer.

    ``degenerate`` flags rank-deficient systems (the minimizer is then the
    minimum-norm one among infinitely many).
    """
    arr = as_matrix(a)
    rhs = as_vector(b)
    if rhs.shape[0] != arr.shape[0]:
        raise ValueError(
            f"shape mismatch: matrix has {arr.shape[0]} rows, rhs has {rhs.shape[0]}"
        )
    if np.iscomplexobj(arr) or np.iscomplexobj(rhs):
        arr = arr.astype(np.complex128, copy=False)
        rhs = rhs.astype(np.complex128, copy=False)
    x, _, rk, _ = np.linalg.lstsq(arr, rhs, rcond=tol.rank_eps)
    residual = float(np.linalg.norm(arr @ x - rhs))
    return LeastSquares(x, residual, bool(rk < arr.shape[1]))


def sym_eig(a, tol: Tolerance = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending.

    Returns (w, v) with real w sorted descending and v's columns the
    matching orthonormal eigenvectors. Rejects matrices whose deviation
    from Hermitian symmetry exceeds residual_eps * ||a||.
    """
    arr = as_matrix(a)
    if arr.shape[0] != arr.shape[1]:
        raise ValueError(f"sym_eig needs a square matrix, got shape {arr.shape}")
    scale = np.linalg.norm(arr)
    dev = np.linalg.norm(arr - arr.conj().T)
    if dev > tol.residual_eps * max(scale, 1.0):
        raise ValueError(
            f"matrix is not Hermitian within tolerance (deviation {dev:.3e})"
        )
    w, v = np.linalg.eigh(arr)
    return w[::-1], v[:, ::-1]
