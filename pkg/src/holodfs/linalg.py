"""Dense complex linear algebra shared by every other module.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``; kets are
1-D arrays. Everything here is a pure function of its inputs.
"""
from __future__ import annotations

import numpy as np

# Module-level tolerances; downstream checks import these instead of
# hard-coding numbers.
STRUCTURAL_TOL = 1e-12
UNITARY_TOL = 1e-10
RECONSTRUCTION_TOL = 1e-9
DEGENERACY_GAP = 1e-9


class NotHermitianError(ValueError):
    """Raised when an operation that needs a Hermitian matrix gets something else."""


class NotUnitaryError(ValueError):
    pass


def as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise ValueError(f"expected a non-empty 2-D matrix, got shape {m.shape}")
    return m


def dagger(a: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(a, -1, -2))


def max_norm(a: np.ndarray) -> float:
    """Largest absolute entry (the ``‖·‖_max`` used for all tolerances)."""
    a = np.asarray(a)
    return float(np.max(np.abs(a))) if a.size else 0.0


def hermiticity_error(a: np.ndarray) -> float:
    return max_norm(a - dagger(a))


def unitarity_error(a: np.ndarray) -> float:
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        return float("inf")
    return max_norm(dagger(a) @ a - np.eye(a.shape[0]))


def is_hermitian(a: np.ndarray, tol: float = STRUCTURAL_TOL) -> bool:
    a = as_matrix(a)
    return a.shape[0] == a.shape[1] and hermiticity_error(a) <= tol


def is_unitary(a: np.ndarray, tol: float = UNITARY_TOL) -> bool:
    return unitarity_error(a) <= tol


def require_hermitian(h, tol: float = STRUCTURAL_TOL) -> np.ndarray:
    h = as_matrix(h)
    if h.shape[0] != h.shape[1]:
        raise NotHermitianError(f"matrix is not square: {h.shape}")
    err = hermiticity_error(h)
    if err > tol:
        raise NotHermitianError(f"max |H - H^dag| = {err:.3e} exceeds {tol:.1e}")
    return h


def require_unitary(u, tol: float = UNITARY_TOL) -> np.ndarray:
    u = as_matrix(u)
    err = unitarity_error(u)
    if err > tol:
        raise NotUnitaryError(f"max |U^dag U - I| = {err:.3e} exceeds {tol:.1e}")
    return u


def kron(a, b) -> np.ndarray:
    """Kronecker product; entry (i*b.rows + k, j*b.cols + l) = a[i, j] * b[k, l]."""
    return np.kron(as_matrix(a), as_matrix(b))


def kron_all(*mats) -> np.ndarray:
    out = as_matrix(mats[0])
    for m in mats[1:]:
        out = np.kron(out, as_matrix(m))
    return out


def eig_hermitian(h) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and orthonormal eigenvector columns of ``h``.

    Within a degenerate cluster (gap below ``DEGENERACY_GAP``) the returned
    vectors are an arbitrary orthonormal basis of the eigenspace.
    """
    h = require_hermitian(h)
    # symmetrize so LAPACK sees an exactly Hermitian input
    w, v = np.linalg.eigh(0.5 * (h + dagger(h)))
    return w, v


def expm_hermitian(h, t: float) -> np.ndarray:
    """``exp(-i h t)`` for Hermitian ``h`` via its eigendecomposition."""
    w, v = eig_hermitian(h)
    return (v * np.exp(-1j * w * t)) @ dagger(v)


def fidelity_gate(a, b) -> float:
    """Global-phase-invariant gate overlap ``|tr(a^dag b)| / d``.

    Also accepted for a projected (possibly leaky, sub-unitary) block, in
    which case leakage shows up as a value below one.
    """
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape or a.shape[0] != a.shape[1]:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    f = abs(np.trace(dagger(a) @ b)) / a.shape[0]
    return float(min(f, 1.0))


def normalize(v) -> np.ndarray:
    v = np.asarray(v, dtype=np.complex128)
    nrm = np.linalg.norm(v)
    if nrm == 0:
        raise ValueError("cannot normalize the zero vector")
    return v / nrm


def is_normalized(v, tol: float = STRUCTURAL_TOL) -> bool:
    return abs(np.linalg.norm(v) - 1.0) <= tol


def projector(basis: np.ndarray) -> np.ndarray:
    """Orthogonal projector onto the span of orthonormal ``basis`` columns."""
    return basis @ dagger(basis)
