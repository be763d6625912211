"""Local PT-symmetric evolution of a three-qubit register.

Alice (qubit 0) evolves under ``H = s (sigma_x + i r sigma_z)``; Bob and Charlie
are idle. Time is measured in units of ``1/s`` with hbar = 1.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .qmath import SX, SY, SZ, kron_all

# e^{kt} beyond this is rescaled away before forming rho(t)
OVERFLOW_KT = 300.0
MIN_NORM = 1e-300


class Regime(enum.Enum):
    UNBROKEN = "unbroken"
    EXCEPTIONAL = "exceptional"
    BROKEN = "broken"


class RenormalizationError(ArithmeticError):
    """The unnormalized trace under- or overflowed; rescale the parameters."""


@dataclass(frozen=True)
class PTParams:
    """Energy scale ``s`` and non-Hermiticity ``r`` of the local Hamiltonian."""

    r: float
    s: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.s) and self.s > 0):
            raise ValueError(f"energy scale s must be positive, got {self.s}")
        if not (math.isfinite(self.r) and self.r >= 0):
            raise ValueError(f"non-Hermiticity r must be >= 0, got {self.r}")

    @property
    def regime(self) -> Regime:
        if self.r < 1:
            return Regime.UNBROKEN
        if self.r == 1:
            return Regime.EXCEPTIONAL
        return Regime.BROKEN

    @property
    def gap(self) -> complex:
        """Energy gap ``w = 2 s sqrt(1 - r^2)``; purely imaginary when broken."""
        if self.r <= 1:
            return complex(2 * self.s * math.sqrt(1 - self.r ** 2))
        return 2j * self.s * math.sqrt(self.r ** 2 - 1)

    @property
    def k(self) -> float:
        """Growth rate ``s sqrt(r^2 - 1)`` of the broken phase (``w/2 = i k``)."""
        if self.r <= 1:
            raise ValueError("growth rate is only defined for r > 1")
        return self.s * math.sqrt(self.r ** 2 - 1)

    @property
    def theta(self) -> float:
        if self.r < 1:
            raise ValueError("theta is only defined for r >= 1")
        return math.acos(1 / self.r)

    @property
    def period(self) -> float:
        if self.r >= 1:
            raise ValueError("evolution is periodic only for r < 1")
        return 2 * math.pi / self.gap.real


def default_horizon(p: PTParams) -> float:
    """Four periods when unbroken, ``20/k`` when broken, ``20/s`` at the exceptional point."""
    if p.regime is Regime.UNBROKEN:
        return 4 * p.period
    if p.regime is Regime.BROKEN:
        return 20 / p.k
    return 20 / p.s


def hpt(p: PTParams) -> np.ndarray:
    return p.s * (SX + 1j * p.r * SZ)


def kernels(p: PTParams, t: float, rescale: bool = False) -> tuple[float, float]:
    """Real kernels ``c = cos(wt/2)`` and ``kappa = (2/w) sin(wt/2)``.

    Continued to ``cosh(kt)``, ``sinh(kt)/k`` when broken and to ``1``, ``t`` at
    the exceptional point. With ``rescale`` the broken-phase pair is multiplied
    by ``e^{-kt}`` once ``kt`` exceeds ``OVERFLOW_KT``.
    """
    if p.regime is Regime.UNBROKEN:
        half = 0.5 * p.gap.real
        return math.cos(half * t), math.sin(half * t) / half
    if p.regime is Regime.EXCEPTIONAL:
        return 1.0, float(t)
    k = p.k
    kt = k * t
    if rescale and kt > OVERFLOW_KT:
        # cosh(x) e^{-x} = (1 + e^{-2x})/2, sinh(x) e^{-x} = (1 - e^{-2x})/2
        e2 = math.exp(-2 * kt)
        return 0.5 * (1 + e2), 0.5 * (1 - e2) / k
    return math.cosh(kt), math.sinh(kt) / k


def _propagator_from_kernels(p: PTParams, c: float, kappa: float) -> np.ndarray:
    q = p.s * kappa
    return np.array([[c + p.r * q, -1j * q],
                     [-1j * q, c - p.r * q]], dtype=complex)


def propagator(p: PTParams, t: float) -> np.ndarray:
    """``exp(-i H t)`` evaluated through the regime-safe kernels."""
    if t < 0:
        raise ValueError("t must be non-negative")
    return _propagator_from_kernels(p, *kernels(p, t))


def scaled_propagator(p: PTParams, t: float) -> np.ndarray:
    """:func:`propagator`, divided by ``e^{kt}`` once ``kt`` is large enough to overflow."""
    if t < 0:
        raise ValueError("t must be non-negative")
    return _propagator_from_kernels(p, *kernels(p, t, rescale=True))


def evolve(rho0, p: PTParams, t: float) -> np.ndarray:
    """Renormalized evolution ``U rho0 U^dag / tr(U rho0 U^dag)`` with ``U`` acting on Alice."""
    rho0 = np.asarray(rho0, dtype=complex)
    n = rho0.shape[0].bit_length() - 1
    u = scaled_propagator(p, t)
    big = kron_all(u, np.eye(1 << (n - 1)))
    rho = big @ rho0 @ big.conj().T
    norm = np.trace(rho).real
    if not (math.isfinite(norm) and norm > MIN_NORM):
        raise RenormalizationError(f"trace {norm} cannot be renormalized at t={t}")
    rho /= norm
    return 0.5 * (rho + rho.conj().T)


def evolve_ket(psi0, p: PTParams, t: float) -> np.ndarray:
    """State-vector form of :func:`evolve` for pure initial states."""
    psi0 = np.asarray(psi0, dtype=complex)
    u = scaled_propagator(p, t)
    psi = (u @ psi0.reshape(2, -1)).reshape(-1)
    norm = np.linalg.norm(psi)
    if not (math.isfinite(norm) and norm ** 2 > MIN_NORM):
        raise RenormalizationError(f"norm {norm} cannot be renormalized at t={t}")
    return psi / norm


def reduced_b_closed(p: PTParams, t: float) -> np.ndarray:
    """Bob's reduced state after evolving GHZ, from the diagonal closed form."""
    c, kappa = kernels(p, t, rescale=True)
    q = p.s * kappa
    # A - B = c + r q, A + B = c - r q, |C|^2 = q^2
    d0 = q * q + (c + p.r * q) ** 2
    d1 = q * q + (c - p.r * q) ** 2
    norm = d0 + d1
    return np.diag([d0 / norm, d1 / norm]).astype(complex)


def _check_broken(r: float) -> None:
    if not r > 1:
        raise ValueError(f"stable states exist only in the broken phase (r > 1), got r={r}")


def _stable_populations(r: float) -> tuple[float, float]:
    root = math.sqrt(r * r - 1)
    small = 1 / (2 * r * (r + root))
    return 1 - small, small


def stable_state_b(r: float) -> np.ndarray:
    """Bob's long-time state ``I/2 + sqrt(r^2-1)/(2r) sigma_z``."""
    _check_broken(r)
    return np.diag(_stable_populations(r)).astype(complex)


def damping(r: float) -> float:
    return 1 / (2 * r)


def stable_state_a(r: float) -> np.ndarray:
    """Alice's long-time state ``(I - cos(theta) sigma_y + sin(theta) sigma_z)/2``.

    Pure for every ``r > 1``; its coherence has magnitude ``1/(2r)``.
    """
    _check_broken(r)
    rho = stable_state_b(r)
    rho -= damping(r) * SY
    return rho


def bloch(rho) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    return np.array([np.trace(rho @ m).real for m in (SX, SY, SZ)])


def ghz() -> np.ndarray:
    psi = np.zeros(8, dtype=complex)
    psi[0] = psi[7] = 1 / math.sqrt(2)
    return psi


def ghz_dm() -> np.ndarray:
    psi = ghz()
    return np.outer(psi, psi.conj())

