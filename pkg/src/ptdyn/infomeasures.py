"""Entropy, mutual information and concurrence along the PT-symmetric evolution."""

from __future__ import annotations

import math
from dataclasses import dataclass, asdict
from typing import Optional

import numpy as np
from scipy.optimize import bisect

from .ptdynamics import (
    PTParams,
    Regime,
    default_horizon,
    evolve_ket,
    ghz,
    reduced_b_closed,
)
from .qmath import PSD_TOL, SY, InvalidDensityMatrix, ket_to_dm, partial_trace, psd_sqrt

YY = np.kron(SY, SY)

# bracket for the mutual-information critical point
CRITICAL_BRACKET = (1 + 1e-9, 10.0)


class NoTurningPoint(LookupError):
    """No sign change of dS_B/dt was bracketed within the search horizon."""


@dataclass(frozen=True)
class TurningPoint:
    t_p: float
    s_p: float


@dataclass
class SweepRecord:
    r: float
    t: float
    S_A: float
    S_B: float
    S_BC: float
    I_AB: float
    I_BC: float
    C_AB: float
    C_BC: float
    p_success: Optional[float] = None

    def as_dict(self) -> dict:
        return asdict(self)


def _entropy_from_probs(lam) -> float:
    lam = np.asarray(lam, dtype=float)
    if lam.size and lam.min() < -PSD_TOL:
        raise InvalidDensityMatrix(f"negative eigenvalue {lam.min():.3e}")
    lam = lam[lam > 0]
    return float(max(-np.sum(lam * np.log2(lam)), 0.0))


def von_neumann_entropy(rho) -> float:
    """``-tr(rho log2 rho)`` in bits; eigenvalues in ``[-1e-10, 0)`` count as zero."""
    rho = np.asarray(rho, dtype=complex)
    return _entropy_from_probs(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)))


def entropy_stable_b(r: float) -> float:
    """Closed-form entropy of Bob's stable state, ``log2[2 / (cos t (sec t + tan t)^sin t)]``.

    ``cos t = 1/r``; ``r = 1`` is accepted as the maximally mixed limit.
    """
    if r < 1:
        raise ValueError(f"stable entropy is defined for r >= 1, got r={r}")
    cos_t = 1 / r
    sin_t = math.sqrt(r * r - 1) / r
    # sec + tan = r + sqrt(r^2 - 1)
    return 1 - math.log2(cos_t) - sin_t * math.log2(r + math.sqrt(r * r - 1))


def mutual_information(rho, i: int, j: int) -> float:
    """``I(i:j) = S(rho_i) + S(rho_j) - S(rho_ij)`` in bits."""
    if i == j:
        raise ValueError("mutual information needs two distinct qubits")
    a, b = sorted((i, j))
    return (von_neumann_entropy(partial_trace(rho, [a]))
            + von_neumann_entropy(partial_trace(rho, [b]))
            - von_neumann_entropy(partial_trace(rho, [a, b])))


def concurrence(rho) -> float:
    """Wootters concurrence of a two-qubit state.

    The square roots of the spin-flipped spectrum are taken as the singular values
    of ``sqrt(rho) (Y x Y) sqrt(rho)^*``, which avoids the ill-conditioned
    eigenproblem of ``rho Y rho^* Y`` on rank-deficient states.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError(f"concurrence needs a 4x4 matrix, got {rho.shape}")
    root = psd_sqrt(rho)
    sv = np.linalg.svd(root @ YY @ root.conj(), compute_uv=False)
    return float(min(max(sv[0] - sv[1:].sum(), 0.0), 1.0))


def ghz_state_at(p: PTParams, t: float) -> np.ndarray:
    return ket_to_dm(evolve_ket(ghz(), p, t))


def record_at(p: PTParams, t: float, p_success: Optional[float] = None) -> SweepRecord:
    """All single, pair and correlation measures of the evolved GHZ state at time ``t``."""
    rho = ghz_state_at(p, t)
    rho_a = partial_trace(rho, [0])
    rho_b = partial_trace(rho, [1])
    rho_c = partial_trace(rho, [2])
    rho_ab = partial_trace(rho, [0, 1])
    rho_bc = partial_trace(rho, [1, 2])
    s_a, s_b, s_c = (von_neumann_entropy(m) for m in (rho_a, rho_b, rho_c))
    s_ab, s_bc = von_neumann_entropy(rho_ab), von_neumann_entropy(rho_bc)
    return SweepRecord(
        r=p.r, t=t,
        S_A=s_a, S_B=s_b, S_BC=s_bc,
        I_AB=s_a + s_b - s_ab,
        I_BC=s_b + s_c - s_bc,
        C_AB=concurrence(rho_ab),
        C_BC=concurrence(rho_bc),
        p_success=p_success,
    )


def entropy_b(p: PTParams, t: float) -> float:
    return _entropy_from_probs(np.diag(reduced_b_closed(p, t)).real)


def entropy_derivative(p: PTParams, t: float) -> float:
    """Central difference of ``S(rho_B(t))`` with step ``1e-6/s``."""
    if t <= 0:
        raise ValueError("derivative is evaluated for t > 0")
    h = 1e-6 / p.s
    lo = max(t - h, 0.0)
    return (entropy_b(p, t + h) - entropy_b(p, lo)) / (t + h - lo)


def find_turning_point(p: PTParams, horizon: Optional[float] = None,
                       grid: int = 2000, xtol: float = 1e-10) -> TurningPoint:
    """First minimum of Bob's entropy, where dS/dt turns from negative to positive."""
    if p.regime is not Regime.BROKEN:
        raise ValueError("turning points are searched for only in the broken phase")
    horizon = default_horizon(p) if horizon is None else horizon
    ts = np.linspace(horizon / grid, horizon, grid)
    prev_t, prev_d = None, None
    for t in ts:
        d = entropy_derivative(p, t)
        if prev_d is not None and prev_d < 0 <= d:
            t_p = bisect(lambda x: entropy_derivative(p, x), prev_t, t, xtol=xtol)
            return TurningPoint(t_p=t_p, s_p=entropy_b(p, t_p))
        prev_t, prev_d = t, d
    raise NoTurningPoint(f"no entropy minimum for r={p.r} within t <= {horizon:g}")


def mutual_info_bc(p: PTParams, t: float) -> float:
    return mutual_information(ghz_state_at(p, t), 1, 2)


def _sample_times(p: PTParams, horizon: Optional[float], samples: int) -> np.ndarray:
    horizon = default_horizon(p) if horizon is None else horizon
    return np.linspace(horizon / samples, horizon, samples)


def delta_mutual_info(r: float, horizon: Optional[float] = None, samples: int = 4000,
                      s: float = 1.0) -> float:
    """Gain of I(B:C) over its initial value of one bit.

    Below the exceptional point the reference is the largest sampled value on
    ``(0, horizon]``; from ``r = 1`` on it is the stable value ``2 S(rho_B^ss)``.
    """
    if samples < 100:
        raise ValueError("at least 100 samples are required")
    if r >= 1:
        return 2 * entropy_stable_b(r) - 1
    p = PTParams(r=r, s=s)
    i_md = max(mutual_info_bc(p, t) for t in _sample_times(p, horizon, samples))
    return i_md - 1


def critical_r_mi(tol: float = 1e-8) -> float:
    """Non-Hermiticity at which the stable I(B:C) drops back to one bit."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    # |dS/dr| < 2 on the bracket, so an x tolerance below tol bounds the residual
    return bisect(lambda x: entropy_stable_b(x) - 0.5, *CRITICAL_BRACKET,
                  xtol=min(tol, 1e-12) * 1e-2)


def concurrence_bc(p: PTParams, t: float) -> float:
    return concurrence(partial_trace(ghz_state_at(p, t), [1, 2]))


def concurrence_amplitude(r: float, horizon: Optional[float] = None, samples: int = 2000,
                          s: float = 1.0) -> float:
    """Largest C(rho_BC) over a uniform grid on ``(0, horizon]``."""
    p = PTParams(r=r, s=s)
    return max(concurrence_bc(p, t) for t in _sample_times(p, horizon, samples))


def stable_concurrence(r: float, s: float = 1.0) -> float:
    """C(rho_BC) after ``30/k``, where the broken-phase transient has died out."""
    p = PTParams(r=r, s=s)
    return concurrence_bc(p, 30 / p.k)
