"""Dense complex linear algebra kernel.

All matrices are plain ``numpy`` arrays of dtype ``complex128``. Flattening is
row-major throughout: ``vec(m)[r * cols + c] == m[r, c]``, and Kronecker
products index as ``i_a * rows_b + i_b``. Every other module relies on these
two conventions.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError, ShapeError

DEFAULT_TOL = 1e-9


def as_matrix(m) -> np.ndarray:
    """Coerce ``m`` to a finite 2-D complex array."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise ShapeError(f"expected a 2-D matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise DomainError("matrix has non-finite entries")
    return a


def check_tol(tol: float) -> float:
    tol = float(tol)
    if not tol > 0:
        raise DomainError(f"tolerance must be positive, got {tol}")
    return tol


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(m, -1, -2))


def kron(a, b) -> np.ndarray:
    return np.kron(as_matrix(a), as_matrix(b))


def vec(m) -> np.ndarray:
    """Row-major flattening of ``m`` into a 1-D vector."""
    return as_matrix(m).reshape(-1).copy()


def unvec(v, rows: int, cols: int) -> np.ndarray:
    v = np.asarray(v, dtype=complex).reshape(-1)
    if v.size != rows * cols:
        raise ShapeError(f"vector of length {v.size} cannot be unvec'd to {rows}x{cols}")
    return v.reshape(rows, cols).copy()


def partial_trace(m, dim_a: int, dim_b: int, which: str = "B") -> np.ndarray:
    """Trace out factor ``which`` ("A" or "B") of an operator on A (x) B."""
    m = as_matrix(m)
    n = dim_a * dim_b
    if m.shape != (n, n):
        raise ShapeError(f"expected a {n}x{n} matrix for dims ({dim_a}, {dim_b}), got {m.shape}")
    t = m.reshape(dim_a, dim_b, dim_a, dim_b)
    if which == "B":
        return np.einsum("ijkj->ik", t)
    if which == "A":
        return np.einsum("ijil->jl", t)
    raise ValueError(f"which must be 'A' or 'B', got {which!r}")


def hermiticity_defect(m: np.ndarray) -> float:
    return float(np.linalg.norm(m - dagger(m)))


def is_hermitian(m, tol: float = DEFAULT_TOL) -> bool:
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        return False
    return hermiticity_defect(m) <= tol * max(1.0, float(np.linalg.norm(m)))


def eigh(m, tol: float = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending.

    The input is symmetrized as ``(m + m^dagger) / 2`` before solving, so
    small drift from repeated assembly does not leak into the spectrum.
    """
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise ShapeError(f"eigh needs a square matrix, got {m.shape}")
    if not is_hermitian(m, tol):
        raise DomainError("matrix is not Hermitian within tolerance")
    w, u = np.linalg.eigh((m + dagger(m)) / 2)
    return w[::-1].copy(), u[:, ::-1].copy()


def is_psd(m, tol: float = DEFAULT_TOL) -> bool:
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise ShapeError(f"is_psd needs a square matrix, got {m.shape}")
    if not is_hermitian(m, tol):
        return False
    w, _ = eigh(m, tol)
    return bool(w[-1] >= -tol * max(1.0, float(w[0])))


def pinv(m, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Moore-Penrose pseudoinverse of a Hermitian PSD matrix.

    Eigenvalues above ``tol * lambda_max`` are inverted, the rest zeroed.
    """
    w, u = eigh(m, tol)
    if w.size == 0 or w[0] <= 0:
        return np.zeros_like(as_matrix(m))
    keep = w > tol * w[0]
    return (u[:, keep] / w[keep]) @ dagger(u[:, keep])


def range_projector(m, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Orthogonal projector onto the support of a Hermitian PSD matrix."""
    w, u = eigh(m, tol)
    if w.size == 0 or w[0] <= 0:
        return np.zeros_like(as_matrix(m))
    keep = w > tol * w[0]
    return u[:, keep] @ dagger(u[:, keep])


def sqrt_psd(m, tol: float = DEFAULT_TOL, inverse: bool = False) -> np.ndarray:
    """Square root (or pseudo-inverse square root) of a Hermitian PSD matrix."""
    w, u = eigh(m, tol)
    if w.size == 0 or w[0] <= 0:
        return np.zeros_like(as_matrix(m))
    keep = w > tol * w[0]
    s = np.sqrt(w[keep])
    if inverse:
        s = 1.0 / s
    return (u[:, keep] * s) @ dagger(u[:, keep])


def expm_hermitian(h, t: float, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Return ``exp(-i t h)`` for Hermitian ``h``."""
    w, u = eigh(h, tol)
    return (u * np.exp(-1j * t * w)) @ dagger(u)


def complete_isometry(cols, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Extend a ``d x r`` isometry to a ``d x d`` unitary.

    The first ``r`` columns of the result are the input, unchanged. The
    remaining columns come from Gram-Schmidt on the canonical basis vectors
    taken in index order; a candidate is accepted when its residual norm
    exceeds ``1 / (2 sqrt(d))``. Since the squared residuals of all ``d``
    candidates sum to ``d - k`` against a ``k``-dimensional span, one pass
    always completes the basis.
    """
    v = as_matrix(cols)
    d, r = v.shape
    if r > d:
        raise ShapeError(f"cannot complete {d}x{r}: more columns than rows")
    if np.linalg.norm(dagger(v) @ v - np.eye(r)) > tol * max(1.0, np.sqrt(r)):
        raise DomainError("input columns are not orthonormal")
    out = np.zeros((d, d), dtype=complex)
    out[:, :r] = v
    k = r
    threshold = 0.5 / np.sqrt(d)
    for i in range(d):
        if k == d:
            break
        e = np.zeros(d, dtype=complex)
        e[i] = 1.0
        basis = out[:, :k]
        for _ in range(2):
            e = e - basis @ (dagger(basis) @ e)
        norm = np.linalg.norm(e)
        if norm > threshold:
            out[:, k] = e / norm
            k += 1
    if k != d:
        raise DomainError("isometry completion failed")  # pragma: no cover
    return out
