"""Gate lists, a small state-vector simulator and the plain-text gate format.

Text format, one gate per line::

    GATE <name> <target> [control <idx> <polarity>] [angle <radians>]

Blank lines and lines starting with ``#`` are ignored by :func:`parse_gate_list`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

_FIXED = {
    "I": np.eye(2, dtype=complex),
    "H": np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
    "PROJ0": np.diag([1, 0]).astype(complex),
    "PROJ1": np.diag([0, 1]).astype(complex),
}


def rx(a: float) -> np.ndarray:
    c, s = math.cos(a / 2), math.sin(a / 2)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


def ry(a: float) -> np.ndarray:
    c, s = math.cos(a / 2), math.sin(a / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def rz(a: float) -> np.ndarray:
    return np.diag([np.exp(-0.5j * a), np.exp(0.5j * a)])


def phase(a: float) -> np.ndarray:
    return np.diag([1, np.exp(1j * a)])


_ROTATIONS = {"RX": rx, "RY": ry, "RZ": rz, "P": phase}
GATE_NAMES = frozenset(_FIXED) | frozenset(_ROTATIONS)


class PostSelectionVanished(ArithmeticError):
    """The post-selected branch has (numerically) zero weight."""


class GateFormatError(ValueError):
    pass


@dataclass(frozen=True)
class GateOp:
    """One gate: a named 2x2 matrix on ``target``, optionally controlled.

    ``polarity`` selects whether the gate fires on control ``|1>`` (1) or ``|0>`` (0).
    """

    name: str
    target: int
    angle: Optional[float] = None
    control: Optional[int] = None
    polarity: int = 1

    def __post_init__(self):
        if self.name not in GATE_NAMES:
            raise GateFormatError(f"unknown gate {self.name!r}")
        if (self.name in _ROTATIONS) != (self.angle is not None):
            raise GateFormatError(f"gate {self.name} angle mismatch")
        if self.polarity not in (0, 1):
            raise GateFormatError(f"polarity must be 0 or 1, got {self.polarity}")
        if self.control is not None and self.control == self.target:
            raise GateFormatError("control and target coincide")
        if self.kind == "projector" and self.control is not None:
            raise GateFormatError("projectors cannot be controlled")

    @property
    def kind(self) -> str:
        if self.name.startswith("PROJ"):
            return "projector"
        return "single" if self.control is None else "controlled"

    @property
    def matrix(self) -> np.ndarray:
        if self.name in _ROTATIONS:
            return _ROTATIONS[self.name](self.angle)
        return _FIXED[self.name].copy()

    def to_line(self) -> str:
        parts = ["GATE", self.name, str(self.target)]
        if self.control is not None:
            parts += ["control", str(self.control), str(self.polarity)]
        if self.angle is not None:
            parts += ["angle", repr(float(self.angle))]
        return " ".join(parts)


def format_gate_list(ops: Iterable[GateOp]) -> str:
    return "".join(op.to_line() + "\n" for op in ops)


def parse_gate_line(line: str) -> GateOp:
    tok = line.split()
    if len(tok) < 3 or tok[0] != "GATE":
        raise GateFormatError(f"malformed gate line: {line!r}")
    kw = {"name": tok[1]}
    try:
        kw["target"] = int(tok[2])
        rest = tok[3:]
        while rest:
            if rest[0] == "control" and len(rest) >= 3:
                kw["control"], kw["polarity"] = int(rest[1]), int(rest[2])
                rest = rest[3:]
            elif rest[0] == "angle" and len(rest) >= 2:
                kw["angle"] = float(rest[1])
                rest = rest[2:]
            else:
                raise GateFormatError(f"unexpected token {rest[0]!r} in {line!r}")
    except ValueError as exc:
        raise GateFormatError(f"malformed gate line: {line!r}") from exc
    return GateOp(**kw)


def parse_gate_list(text: str) -> list[GateOp]:
    ops = []
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            ops.append(parse_gate_line(line))
    return ops


def n_qubits_of(ops: Iterable[GateOp]) -> int:
    idx = [0]
    for op in ops:
        idx.append(op.target)
        if op.control is not None:
            idx.append(op.control)
    return max(idx) + 1


def apply_gate(state: np.ndarray, op: GateOp, n: int) -> np.ndarray:
    """Apply ``op`` to a length ``2**n`` vector (or a ``2**n x m`` block of columns)."""
    extra = state.shape[1:]
    psi = state.reshape((2,) * n + extra)
    m = op.matrix
    if op.control is None:
        psi = np.moveaxis(np.tensordot(m, psi, axes=([1], [op.target])), 0, op.target)
    else:
        psi = psi.copy()
        sel = [slice(None)] * psi.ndim
        sel[op.control] = op.polarity
        sel = tuple(sel)
        sub = psi[sel]
        # the control axis is gone from ``sub``, shifting later axes left by one
        t_ax = op.target - (op.target > op.control)
        psi[sel] = np.moveaxis(np.tensordot(m, sub, axes=([1], [t_ax])), 0, t_ax)
    return psi.reshape(state.shape)


def simulate(ops: Iterable[GateOp], n: int, state=None) -> np.ndarray:
    """Run ``ops`` from ``|0...0>`` (or ``state``); projectors leave the vector unnormalized."""
    if state is None:
        state = np.zeros(1 << n, dtype=complex)
        state[0] = 1
    state = np.asarray(state, dtype=complex)
    for op in ops:
        state = apply_gate(state, op, n)
    return state


def operator_of(ops: Iterable[GateOp], n: int) -> np.ndarray:
    """Full ``2**n x 2**n`` matrix of a gate sequence (first gate acts first)."""
    return simulate(list(ops), n, np.eye(1 << n, dtype=complex))


def equal_up_to_phase(a: np.ndarray, b: np.ndarray) -> float:
    """Residual ``min_phi ||a - e^{i phi} b||_max`` after aligning the global phase."""
    overlap = np.vdot(b, a)
    ph = overlap / abs(overlap) if abs(overlap) > 0 else 1.0
    return float(np.max(np.abs(a - ph * b)))
