"""Ancilla-based embedding of Alice's non-unitary propagator.

The propagator is split as ``U/M = cos(phi) V1 + sin(phi) V2`` with
``V1 = RX(-2 phi1)`` and ``V2 = Z``. An ancilla (qubit 3) prepared by
``V0 = RY(2 phi)`` selects ``V1`` on ``|0>`` and ``V2`` on ``|1>``; a final
Hadamard and post-selection on ancilla ``|0>`` leaves ``U/(sqrt(2) M)`` acting
on the work register.

With the real kernels ``c`` and ``q = s kappa`` of :func:`ptdynamics.kernels`
the decomposition reads ``sin(phi) = r q / M``, ``cos(phi) cos(phi1) = c / M``,
``cos(phi) sin(phi1) = -q / M`` and ``M^2 = c^2 + (1 + r^2) q^2``, which is
real in every phase.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .circuit import (
    GateOp,
    PostSelectionVanished,
    equal_up_to_phase,
    rx,
    ry,
    simulate,
)
from .ptdynamics import PTParams, evolve, ghz_dm, kernels, scaled_propagator
from .qmath import fidelity, partial_trace, trace_distance

ALICE, BOB, CHARLIE, ANCILLA = 0, 1, 2, 3
N_QUBITS = 4
MIN_NORMALIZER = 1e-12
MIN_BRANCH_NORM = 1e-14


class DegenerateNormalizer(ArithmeticError):
    """An LCU normalizer vanished, so the angles are undefined."""


@dataclass(frozen=True)
class LcuAngles:
    """Angles and normalizers of the two-term decomposition.

    ``m1`` and ``m2`` are ``M1/sqrt(1-r^2)`` and ``M2/sqrt(1-r^2)`` for the
    textbook normalizers ``M1 = sqrt(1 - r^2 cos(wt))`` and
    ``M2 = sqrt(1 - r^2 cos^2(wt/2))``; divided this way they stay real and
    non-zero across the exceptional point. ``m`` equals ``m1``. When ``kt``
    exceeds the overflow threshold all three refer to the propagator rescaled
    by ``e^{-kt}``.
    """

    phi: float
    phi1: float
    phi2: float
    m1: float
    m2: float
    m: float


def lcu_angles(p: PTParams, t: float) -> LcuAngles:
    if t < 0:
        raise ValueError("t must be non-negative")
    c, kappa = kernels(p, t, rescale=True)
    q = p.s * kappa
    m2 = math.hypot(c, q)
    m1 = math.hypot(m2, p.r * q)
    if m1 < MIN_NORMALIZER or m2 < MIN_NORMALIZER:
        raise DegenerateNormalizer(f"normalizer vanished at r={p.r}, t={t}")
    return LcuAngles(
        phi=math.atan2(p.r * q, m2),
        phi1=math.atan2(-q, c),
        phi2=0.0,
        m1=m1,
        m2=m2,
        m=m1,
    )


def build_gates(a: LcuAngles) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``V0``, ``V1`` and ``V2`` as explicit 2x2 matrices."""
    v0 = ry(2 * a.phi)
    v1 = rx(-2 * a.phi1)
    c2, s2 = math.cos(a.phi2), math.sin(a.phi2)
    v2 = np.array([[c2, -1j * s2], [1j * s2, -c2]], dtype=complex)
    return v0, v1, v2


def reassembled(a: LcuAngles) -> np.ndarray:
    _, v1, v2 = build_gates(a)
    return math.cos(a.phi) * v1 + math.sin(a.phi) * v2


def ghz_preparation() -> list[GateOp]:
    return [
        GateOp("H", ALICE),
        GateOp("X", BOB, control=ALICE),
        GateOp("X", CHARLIE, control=ALICE),
    ]


def circuit_ops(p: PTParams, t: float, decompose: bool = False) -> list[GateOp]:
    """Full gate list: GHZ preparation, LCU block and ancilla post-selection."""
    a = lcu_angles(p, t)
    v1 = GateOp("RX", ALICE, angle=-2 * a.phi1, control=ANCILLA, polarity=0)
    v2 = GateOp("Z", ALICE, control=ANCILLA, polarity=1)
    if decompose:
        body = (decompose_controlled(v1.matrix, 0, ANCILLA, ALICE)
                + decompose_controlled(v2.matrix, 1, ANCILLA, ALICE))
    else:
        body = [v1, v2]
    return (ghz_preparation()
            + [GateOp("RY", ANCILLA, angle=2 * a.phi)]
            + body
            + [GateOp("H", ANCILLA), GateOp("PROJ0", ANCILLA)])


@dataclass(frozen=True)
class CircuitResult:
    rho_work: np.ndarray
    p_success: float


def run_ops(ops: list[GateOp]) -> CircuitResult:
    psi = simulate(ops, N_QUBITS)
    weight = float(np.vdot(psi, psi).real)
    if weight < MIN_BRANCH_NORM:
        raise PostSelectionVanished(f"post-selected branch weight {weight:.3e}")
    psi = psi / math.sqrt(weight)
    rho = partial_trace(np.outer(psi, psi.conj()), [ALICE, BOB, CHARLIE])
    return CircuitResult(rho_work=rho, p_success=weight)


def run_circuit(p: PTParams, t: float, decompose: bool = False) -> CircuitResult:
    return run_ops(circuit_ops(p, t, decompose=decompose))


def _zyz(v: np.ndarray) -> tuple[float, float, float, float]:
    """``v = e^{i alpha} RZ(beta) RY(gamma) RZ(delta)``."""
    alpha = 0.5 * cmath.phase(np.linalg.det(v))
    w = v * cmath.exp(-1j * alpha)
    a, b = w[0, 0], w[1, 0]
    gamma = 2 * math.atan2(abs(b), abs(a))
    arg_a = cmath.phase(a) if abs(a) > 1e-15 else 0.0
    arg_b = cmath.phase(b) if abs(b) > 1e-15 else 0.0
    return alpha, arg_b - arg_a, gamma, -arg_a - arg_b


def _is_trivial(angle: float) -> bool:
    # rotations by multiples of 2 pi are a global phase at worst
    return abs(math.remainder(angle, 2 * math.pi)) < 1e-14


def decompose_controlled(v, polarity: int = 1, control: int = 0,
                         target: int = 1) -> list[GateOp]:
    """Controlled-``v`` as ``C, CNOT, B, CNOT, A`` plus a phase on the control.

    ``A = RZ(beta) RY(gamma/2)``, ``B = RY(-gamma/2) RZ(-(delta+beta)/2)`` and
    ``C = RZ((delta-beta)/2)`` satisfy ``ABC = I`` and ``e^{i alpha} AXBXC = v``.
    A 0-controlled gate is sandwiched between X gates on the control. The
    result equals controlled-``v`` up to a global phase.
    """
    v = np.asarray(v, dtype=complex)
    if v.shape != (2, 2) or np.max(np.abs(v @ v.conj().T - np.eye(2))) > 1e-10:
        raise ValueError("expected a 2x2 unitary")
    alpha, beta, gamma, delta = _zyz(v)

    def rot(name, angle, qubit=target):
        return [] if _is_trivial(angle) else [GateOp(name, qubit, angle=angle)]

    c_part = rot("RZ", 0.5 * (delta - beta))
    b_part = rot("RZ", -0.5 * (delta + beta)) + rot("RY", -0.5 * gamma)
    a_part = rot("RY", 0.5 * gamma) + rot("RZ", beta)
    ops = list(c_part)
    if b_part or a_part or c_part:
        cx = GateOp("X", target, control=control)
        ops += [cx] + b_part + [cx] + a_part
    ops += rot("P", alpha, control)
    if polarity == 0 and ops:
        flip = GateOp("X", control)
        ops = [flip] + ops + [flip]
    return ops


def direct_state(p: PTParams, t: float) -> np.ndarray:
    return evolve(ghz_dm(), p, t)


def verify_point(p: PTParams, t: float, decompose: bool = False) -> dict:
    """Circuit output against direct renormalized evolution at one ``(r, t)``."""
    res = run_circuit(p, t, decompose=decompose)
    ref = direct_state(p, t)
    return {
        "r": p.r,
        "t": t,
        "trace_distance": trace_distance(res.rho_work, ref),
        "fidelity": fidelity(res.rho_work, ref),
        "p_success": res.p_success,
    }


def circuit_fidelity_report(p: PTParams, t: float) -> float:
    res = run_circuit(p, t)
    return fidelity(res.rho_work, direct_state(p, t))


def expected_success_probability(p: PTParams, t: float) -> float:
    """``||(U x I x I)|GHZ>||^2 / (2 M^2)`` from the propagator alone."""
    a = lcu_angles(p, t)
    u = scaled_propagator(p, t)
    # GHZ puts weight 1/2 on Alice |0> and |1>
    norm2 = 0.5 * (np.sum(np.abs(u[:, 0]) ** 2) + np.sum(np.abs(u[:, 1]) ** 2))
    return float(norm2 / (2 * a.m ** 2))


def reassembly_residual(p: PTParams, t: float) -> float:
    """Mismatch between ``cos(phi) V1 + sin(phi) V2`` and ``U/M`` after phase alignment."""
    a = lcu_angles(p, t)
    u = scaled_propagator(p, t)
    return equal_up_to_phase(reassembled(a), u / a.m)

