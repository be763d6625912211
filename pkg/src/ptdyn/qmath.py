"""Dense complex-matrix kernel for small qubit registers.

Qubit 0 is the leftmost tensor factor and basis states are labelled big-endian,
``|q0 q1 ... q_{n-1}>``. Density matrices and state vectors are plain numpy
arrays; :func:`validate_density_matrix` enforces the physical invariants where
a caller needs them.
"""

from __future__ import annotations

import cmath
from typing import Sequence

import numpy as np

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)

TRACE_TOL = 1e-12
HERMITIAN_TOL = 1e-12
PSD_TOL = 1e-10


class InvalidDensityMatrix(ValueError):
    """Raised when a matrix violates trace, Hermiticity or positivity."""


def num_qubits(m: np.ndarray) -> int:
    dim = m.shape[0]
    n = dim.bit_length() - 1
    if dim < 1 or 1 << n != dim:
        raise ValueError(f"dimension {dim} is not a power of two")
    return n


def _as_square(m) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise ValueError(f"expected a non-empty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def validate_density_matrix(rho, tol_trace: float = TRACE_TOL,
                            tol_herm: float = HERMITIAN_TOL,
                            tol_psd: float = PSD_TOL) -> np.ndarray:
    """Return ``rho`` as a complex array or raise :class:`InvalidDensityMatrix`."""
    rho = _as_square(rho)
    num_qubits(rho)
    tr = np.trace(rho)
    if abs(tr - 1) > tol_trace:
        raise InvalidDensityMatrix(f"trace {tr} differs from 1")
    if np.max(np.abs(rho - rho.conj().T)) > tol_herm:
        raise InvalidDensityMatrix("matrix is not Hermitian")
    lam_min = np.linalg.eigvalsh(rho)[0]
    if lam_min < -tol_psd:
        raise InvalidDensityMatrix(f"negative eigenvalue {lam_min:.3e}")
    return rho


def ket_to_dm(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    return np.outer(psi, psi.conj())


def kron(a, b) -> np.ndarray:
    return np.kron(_as_square(a), _as_square(b))


def kron_all(*ops) -> np.ndarray:
    out = np.eye(1, dtype=complex)
    for op in ops:
        out = kron(out, op)
    return out


def partial_trace(rho, keep: Sequence[int]) -> np.ndarray:
    """Reduce ``rho`` to the qubits listed in ``keep`` (strictly increasing).

    An empty ``keep`` traces everything out and returns the 1x1 matrix ``[[tr rho]]``.
    """
    rho = _as_square(rho)
    n = num_qubits(rho)
    keep = list(keep)
    for q in keep:
        if not 0 <= q < n:
            raise IndexError(f"qubit index {q} out of range for {n} qubits")
    if len(set(keep)) != len(keep):
        raise ValueError(f"duplicate qubit indices in {keep}")
    if keep != sorted(keep):
        raise ValueError(f"qubit indices must be increasing, got {keep}")

    t = rho.reshape([2] * (2 * n))
    row = list(range(n))
    col = [n + q if q in keep else q for q in range(n)]
    out = [q for q in keep] + [n + q for q in keep]
    d = 1 << len(keep)
    return np.einsum(t, row + col, out).reshape(d, d)


def eig_hermitian(m, tol: float = 1e-10) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and orthonormal eigenvector columns of a Hermitian matrix."""
    m = _as_square(m)
    if np.max(np.abs(m - m.conj().T)) > tol:
        raise ValueError("matrix is not Hermitian")
    return np.linalg.eigh(0.5 * (m + m.conj().T))


def psd_sqrt(m) -> np.ndarray:
    w, v = eig_hermitian(m)
    w = np.sqrt(np.clip(w, 0.0, None))
    return (v * w) @ v.conj().T


def _sinc_like(delta: complex, t: float) -> complex:
    # sin(delta t)/delta, even in delta so the branch of the square root is irrelevant
    x = delta * t
    if abs(x) < 1e-4:
        return t * (1 - x * x / 6 + x ** 4 / 120)
    return cmath.sin(x) / delta


def expm_2x2(h, t: float) -> np.ndarray:
    """``exp(-i h t)`` for a 2x2 matrix via Cayley-Hamilton.

    Writing ``h = tau*I + h0`` with ``h0`` traceless gives ``h0^2 = delta^2 I``
    and ``exp(-i h t) = exp(-i tau t) [cos(delta t) I - i sin(delta t)/delta h0]``.
    At an exceptional point ``delta = 0`` and the series truncates to ``I - i h0 t``.
    """
    h = _as_square(h)
    if h.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got {h.shape}")
    tau = 0.5 * (h[0, 0] + h[1, 1])
    h0 = h - tau * I2
    delta = cmath.sqrt(h0[0, 0] ** 2 + h0[0, 1] * h0[1, 0])
    out = cmath.cos(delta * t) * I2 - 1j * _sinc_like(delta, t) * h0
    return cmath.exp(-1j * tau * t) * out


def trace_distance(a, b) -> float:
    a, b = _as_square(a), _as_square(b)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return 0.5 * float(np.sum(np.linalg.svd(a - b, compute_uv=False)))


def fidelity(a, b) -> float:
    """Uhlmann fidelity ``(tr sqrt(sqrt(a) b sqrt(a)))**2``."""
    a, b = _as_square(a), _as_square(b)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    sa = psd_sqrt(a)
    lam = np.linalg.eigvalsh(sa @ b @ sa)
    f = float(np.sum(np.sqrt(np.clip(lam, 0.0, None)))) ** 2
    return min(max(f, 0.0), 1.0)
