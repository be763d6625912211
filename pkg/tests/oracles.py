"""Independent reference computations used only by the tests."""

import math

import numpy as np

SY = np.array([[0, -1j], [1j, 0]])


def expm_series(h, t, terms=40):
    """Truncated Taylor series of exp(-i h t)."""
    h = np.asarray(h, dtype=complex)
    x = -1j * t * h
    out = np.eye(h.shape[0], dtype=complex)
    term = np.eye(h.shape[0], dtype=complex)
    for k in range(1, terms):
        term = term @ x / k
        out = out + term
    return out


def expm_scaled_series(h, t, terms=40):
    """Series with scaling and squaring, for larger ||h t||."""
    norm = np.max(np.abs(h)) * abs(t)
    j = max(0, int(math.ceil(math.log2(norm))) + 1) if norm > 0.5 else 0
    out = expm_series(h, t / 2 ** j, terms)
    for _ in range(j):
        out = out @ out
    return out


def partial_trace_by_index(rho, keep, n):
    """Explicit summation over all basis pairs of the traced-out qubits."""
    rho = np.asarray(rho)
    traced = [q for q in range(n) if q not in keep]
    d = 2 ** len(keep)
    out = np.zeros((d, d), dtype=complex)

    def index(bits):
        return int("".join(str(b) for b in bits), 2)

    for i in range(d):
        ib = [int(b) for b in format(i, f"0{len(keep)}b")] if keep else []
        for j in range(d):
            jb = [int(b) for b in format(j, f"0{len(keep)}b")] if keep else []
            total = 0
            for e in range(2 ** len(traced)):
                eb = [int(b) for b in format(e, f"0{len(traced)}b")] if traced else []
                row, col = [0] * n, [0] * n
                for q, b in zip(keep, ib):
                    row[q] = b
                for q, b in zip(keep, jb):
                    col[q] = b
                for q, b in zip(traced, eb):
                    row[q] = col[q] = b
                total += rho[index(row), index(col)]
            out[i, j] = total
    return out


def concurrence_eig(rho):
    """Wootters concurrence through the eigenvalues of rho (Y x Y) rho^* (Y x Y)."""
    yy = np.kron(SY, SY)
    lam = np.linalg.eigvals(rho @ yy @ rho.conj() @ yy)
    lam = np.sort(np.sqrt(np.clip(lam.real, 0, None)))[::-1]
    return max(0.0, lam[0] - lam[1:].sum())


def binary_entropy(p):
    return -sum(x * math.log2(x) for x in (p, 1 - p) if x > 0)


def turning_point_analytic(r, s=1.0):
    """Minimum of Bob's entropy in the broken phase.

    With y = tanh(kt)/sqrt(r^2-1), Bob's smaller population is
    1/2 - r y / (1 + (1+r^2) y^2), extremal at y = 1/sqrt(1+r^2).
    """
    k = s * math.sqrt(r * r - 1)
    t = math.atanh(math.sqrt((r * r - 1) / (r * r + 1))) / k
    p_min = 0.5 - r / (2 * math.sqrt(1 + r * r))
    return t, binary_entropy(p_min)


def random_density_matrix(rng, n_qubits, rank=None):
    d = 2 ** n_qubits
    rank = d if rank is None else rank
    g = rng.normal(size=(d, rank)) + 1j * rng.normal(size=(d, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho)


def random_unitary(rng, d=2):
    z = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_hermitian(rng, d):
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return (a + a.conj().T) / 2


def random_separable(rng, terms=3):
    """Convex mixture of product states."""
    w = rng.random(terms)
    w /= w.sum()
    rho = 0
    for wi in w:
        rho = rho + wi * np.kron(random_density_matrix(rng, 1), random_density_matrix(rng, 1))
    return rho
