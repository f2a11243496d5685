"""A small qudit statevector simulator for single-qudit gates and controlled adders."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .catalog import fourier_matrix
from .errors import DomainError
from .state import DEFAULT_TOL, PureState, unitary_deviation


@dataclass(frozen=True)
class LocalGate:
    """Single-qudit unitary ``matrix`` acting on ``wire``."""

    wire: int
    matrix: np.ndarray
    label: str = "U"


@dataclass(frozen=True)
class ControlledAdder:
    """|i>_control |j>_target -> |i>|j + i mod d>."""

    control: int
    target: int
    label: str = "C+"


Gate = Union[LocalGate, ControlledAdder]


def build_ame43_circuit() -> list[Gate]:
    """Fourier on wires 0 and 1, then adders producing |i, j, i+j, i+2j>."""
    f3 = fourier_matrix(3)
    return [
        LocalGate(0, f3, "F3"),
        LocalGate(1, f3, "F3"),
        ControlledAdder(0, 2),
        ControlledAdder(1, 2),
        ControlledAdder(0, 3),
        ControlledAdder(1, 3),
        ControlledAdder(1, 3),
    ]


def _wire(w: int, n: int) -> int:
    if not 0 <= w < n:
        raise DomainError(f"wire {w} outside 0..{n - 1}")
    return w


def simulate_circuit(
    gates: Sequence[Gate], initial: PureState, tol: float = DEFAULT_TOL
) -> PureState:
    """Apply the gates in order to a dense copy of ``initial``."""
    n, d = initial.num_parties, initial.local_dim
    psi = initial.to_vector().reshape((d,) * n)
    for g in gates:
        if isinstance(g, LocalGate):
            w = _wire(g.wire, n)
            u = np.asarray(g.matrix, dtype=complex)
            if u.shape != (d, d):
                raise DomainError(f"gate on wire {w} must be {d}x{d}, got {u.shape}")
            if unitary_deviation(u) > tol:
                raise DomainError(f"gate {g.label} on wire {w} is not unitary")
            psi = np.moveaxis(np.tensordot(u, psi, axes=([1], [w])), 0, w)
        elif isinstance(g, ControlledAdder):
            c, t = _wire(g.control, n), _wire(g.target, n)
            if c == t:
                raise DomainError(f"control and target coincide on wire {c}")
            out = np.empty_like(psi)
            for i in range(d):
                src = [slice(None)] * n
                src[c] = i
                block = psi[tuple(src)]
                # after removing axis c, the target axis shifts down when t > c
                axis = t - 1 if t > c else t
                out[tuple(src)] = np.roll(block, i, axis=axis)
            psi = out
        else:
            raise DomainError(f"unknown gate {g!r}")
    return PureState.from_vector(psi.ravel(), n, d)


def zero_state(num_parties: int, local_dim: int) -> PureState:
    return PureState.from_terms(num_parties, local_dim, {(0,) * num_parties: 1.0})


def describe(gates: Sequence[Gate]) -> list[str]:
    lines = []
    for g in gates:
        if isinstance(g, LocalGate):
            lines.append(f"{g.label} on wire {g.wire}")
        else:
            lines.append(f"adder {g.control} -> {g.target}")
    return lines
