"""Brute-force reference implementations for tests and `ringspin validate`.

Nothing here is used by the production path: the dense eigensolver, the
matrix-exponential propagator built on it, and composite Simpson quadrature
exist only to check the closed-form spectrum and the exact window integrals
against an independent route.  Deliberately plain; no performance work.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["DenseEigenResult", "dense_eigen", "expm_propagate", "simpson_integral"]

MAX_EIGEN_SIZE = 256
MAX_PROPAGATE_SIZE = 64


@dataclass(frozen=True)
class DenseEigenResult:
    values: np.ndarray    # ascending
    vectors: np.ndarray   # orthogonal, column i pairs with values[i]


def dense_eigen(matrix) -> DenseEigenResult:
    """Full decomposition of a real symmetric matrix (LAPACK path),
    eigenvalues sorted ascending."""
    A = np.asarray(matrix, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"matrix must be square, got shape {A.shape}")
    if A.shape[0] > MAX_EIGEN_SIZE:
        raise ValueError(f"oracle limited to {MAX_EIGEN_SIZE}x{MAX_EIGEN_SIZE}")
    scale = max(float(np.abs(A).max()), 1.0)
    if float(np.abs(A - A.T).max()) > 1e-12 * scale:
        raise ValueError("matrix is not symmetric")
    values, vectors = np.linalg.eigh(A)
    return DenseEigenResult(values=values, vectors=vectors)


def expm_propagate(matrix, initial, tau: float) -> np.ndarray:
    """exp(-i G tau) initial via the dense decomposition of G."""
    A = np.asarray(matrix, dtype=float)
    if A.shape[0] > MAX_PROPAGATE_SIZE:
        raise ValueError(f"oracle limited to {MAX_PROPAGATE_SIZE} sites")
    v = np.asarray(initial, dtype=complex)
    if v.shape != (A.shape[0],):
        raise ValueError(f"state must have shape ({A.shape[0]},), got {v.shape}")
    norm_sq = float(np.sum(np.abs(v) ** 2))
    if abs(norm_sq - 1.0) > 1e-9:
        raise ValueError(f"state is not normalized: sum |a_j|^2 = {norm_sq!r}")
    eig = dense_eigen(A)
    return eig.vectors @ (np.exp(-1j * eig.values * float(tau)) * (eig.vectors.T @ v))


def simpson_integral(samples, t_max: float) -> float:
    """Composite Simpson rule for uniform samples of f over [0, t_max].

    Requires an odd number of samples (even interval count).
    """
    y = np.asarray(samples, dtype=float)
    if y.ndim != 1 or y.size < 3:
        raise ValueError("need a 1-D array of at least 3 samples")
    if y.size % 2 == 0:
        raise ValueError(f"sample count must be odd, got {y.size}")
    h = float(t_max) / (y.size - 1)
    return (y[0] + y[-1] + 4.0 * y[1:-1:2].sum() + 2.0 * y[2:-1:2].sum()) * h / 3.0
