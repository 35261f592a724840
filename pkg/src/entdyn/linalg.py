"""Dense complex linear algebra for Hilbert spaces of dimension <= 8.

Everything here is a pure function on numpy arrays; the validators raise on
malformed inputs instead of silently repairing them.
"""

from __future__ import annotations

import numpy as np

HERMITIAN_TOL = 1e-12
NORM_TOL = 1e-12
TRACE_TOL = 1e-12
# MC averaging leaves eigenvalues a hair below zero; anything lower is a bug,
# not roundoff, and must not be clamped away.
EIG_FLOOR = -1e-10

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
IDENTITY_2 = np.eye(2, dtype=complex)

# Two-qubit Bell states in the |00>, |01>, |10>, |11> product basis
# (qubit A is the left, most significant factor).
PHI_PLUS = np.array([1.0, 0.0, 0.0, 1.0], dtype=complex) / np.sqrt(2.0)
PHI_MINUS = np.array([1.0, 0.0, 0.0, -1.0], dtype=complex) / np.sqrt(2.0)
PSI_PLUS = np.array([0.0, 1.0, 1.0, 0.0], dtype=complex) / np.sqrt(2.0)
PSI_MINUS = np.array([0.0, 1.0, -1.0, 0.0], dtype=complex) / np.sqrt(2.0)


def dagger(m: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return np.asarray(m).conj().T


def check_state_vector(psi, dim: int | None = None) -> np.ndarray:
    """Validate a pure state: 1-D, complex, unit norm to 1e-12."""
    psi = np.asarray(psi, dtype=complex)
    if psi.ndim != 1:
        raise ValueError(f"state vector must be 1-D, got shape {psi.shape}")
    if dim is not None and psi.shape[0] != dim:
        raise ValueError(f"state vector has dimension {psi.shape[0]}, expected {dim}")
    norm_sq = float(np.sum(np.abs(psi) ** 2))
    if abs(norm_sq - 1.0) > NORM_TOL:
        raise ValueError(f"state vector not normalized: |psi|^2 = {norm_sq!r}")
    return psi


def check_hermitian(m, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Validate a square Hermitian matrix to the given entrywise tolerance."""
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    dev = float(np.max(np.abs(m - m.conj().T)))
    if dev > tol:
        raise ValueError(f"matrix is not Hermitian: max |M - M^dag| = {dev:.3e}")
    return m


def check_density_matrix(rho, dim: int | None = None) -> np.ndarray:
    """Validate a density matrix: Hermitian, unit trace, eigenvalues >= -1e-10."""
    rho = check_hermitian(rho)
    if dim is not None and rho.shape[0] != dim:
        raise ValueError(f"density matrix has dimension {rho.shape[0]}, expected {dim}")
    tr = complex(np.trace(rho))
    if abs(tr - 1.0) > TRACE_TOL:
        raise ValueError(f"density matrix trace is {tr!r}, expected 1")
    w_min = float(np.min(np.linalg.eigvalsh(rho)))
    if w_min < EIG_FLOOR:
        raise ValueError(f"density matrix has eigenvalue {w_min:.3e} < {EIG_FLOOR}")
    return rho


def projector(psi) -> np.ndarray:
    """|psi><psi| for a unit-norm state vector."""
    psi = check_state_vector(psi)
    return np.outer(psi, psi.conj())


def tensor_product(a, b) -> np.ndarray:
    """Kronecker product of two vectors or two matrices (left factor is subsystem A)."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.ndim != b.ndim or a.ndim not in (1, 2):
        raise ValueError("operands must both be vectors or both be matrices")
    return np.kron(a, b)


def partial_trace(rho, keep: int, dims) -> np.ndarray:
    """Trace out all tensor factors except ``dims[keep]``.

    ``dims`` lists the factor dimensions in the global ordering (left factor
    first); their product must equal the dimension of ``rho``.
    """
    dims = tuple(int(d) for d in dims)
    total = int(np.prod(dims))
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (total, total):
        raise ValueError(f"dims {dims} do not match matrix of shape {rho.shape}")
    if not 0 <= keep < len(dims):
        raise ValueError(f"keep index {keep} out of range for {len(dims)} factors")
    t = rho.reshape(dims + dims)
    n_factors = len(dims)
    # Trace highest non-kept axis first so earlier axis numbers stay valid.
    for axis in reversed(range(len(dims))):
        if axis == keep:
            continue
        t = np.trace(t, axis1=axis, axis2=axis + n_factors)
        n_factors -= 1
    return t


def hermitian_eigen(m) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix, eigenvalues sorted descending.

    Returns ``(w, v)`` with ``m @ v[:, k] == w[k] * v[:, k]``.
    """
    m = check_hermitian(m)
    w, v = np.linalg.eigh(m)
    return np.ascontiguousarray(w[::-1]), np.ascontiguousarray(v[:, ::-1])


def psd_sqrt(rho) -> np.ndarray:
    """Hermitian PSD square root; eigenvalues in [-1e-10, 0) are clamped to 0."""
    w, v = hermitian_eigen(rho)
    if float(w[-1]) < EIG_FLOOR:
        raise ValueError(f"matrix is not PSD: eigenvalue {float(w[-1]):.3e}")
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ v.conj().T


def von_neumann_entropy(rho) -> float:
    """-sum(lambda log2 lambda) in bits, with 0 log 0 = 0."""
    rho = check_density_matrix(rho)
    w = np.clip(np.linalg.eigvalsh(rho), 0.0, None)
    w = w[w > 1e-18]
    return float(max(0.0, -np.sum(w * np.log2(w))))
