"""Statevector execution: exact gate application and post-selection.

States are flat complex ndarrays of length 2**n.  Internally a state is
viewed as an n-dimensional [2]*n tensor; with qubit 0 the least significant
index bit, qubit q lives on tensor axis n-1-q.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from qpf.errors import InputError, PostSelectionError
from qpf.qsim.circuit import (
    Circuit,
    Cnot,
    ControlledUnitary,
    Gate,
    SingleQubit,
    UniformlyControlledRy,
    _ry_matrix,
)

# CNOT as a 4x4 in (control, target) bit order: index = control*2 + target.
_CNOT = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)

MIN_POST_SELECT_PROB = 1e-12


def zero_state(num_qubits: int) -> np.ndarray:
    state = np.zeros(2**num_qubits, dtype=complex)
    state[0] = 1.0
    return state


def _apply_on_axes(arr: np.ndarray, mat: np.ndarray, axes: list[int]) -> np.ndarray:
    """Apply ``mat`` to tensor ``arr`` where ``axes[k]`` holds matrix bit k."""
    m = len(axes)
    mat_t = np.asarray(mat, dtype=complex).reshape([2] * (2 * m))
    # mat axis m+j carries input bit m-1-j; contract it with the matching axis.
    contract = [axes[m - 1 - j] for j in range(m)]
    out = np.tensordot(mat_t, arr, axes=(list(range(m, 2 * m)), contract))
    return np.moveaxis(out, range(m), contract)


def _axis(num_qubits: int, qubit: int) -> int:
    return num_qubits - 1 - qubit


def apply_gate(state: np.ndarray, gate: Gate, num_qubits: int) -> np.ndarray:
    psi = state.reshape([2] * num_qubits)
    if isinstance(gate, SingleQubit):
        psi = _apply_on_axes(psi, gate.u, [_axis(num_qubits, gate.target)])
    elif isinstance(gate, Cnot):
        axes = [_axis(num_qubits, gate.target), _axis(num_qubits, gate.control)]
        psi = _apply_on_axes(psi, _CNOT, axes)
    elif isinstance(gate, ControlledUnitary):
        psi = psi.copy()
        sel = [slice(None)] * num_qubits
        for i, c in enumerate(gate.controls):
            sel[_axis(num_qubits, c)] = (gate.pattern >> i) & 1
        # Axis positions of the targets inside the control-sliced view.
        sub_axes = []
        for t in gate.targets:
            shift = sum(1 for c in gate.controls if c > t)
            sub_axes.append(_axis(num_qubits, t) - shift)
        psi[tuple(sel)] = _apply_on_axes(psi[tuple(sel)], gate.u, sub_axes)
    elif isinstance(gate, UniformlyControlledRy):
        # Equivalent block-diagonal matrix over (target, controls) with the
        # target as bit 0: block m is Ry(angles[m]).
        k = len(gate.controls)
        big = np.zeros((2 ** (k + 1), 2 ** (k + 1)), dtype=complex)
        for m_val in range(2**k):
            big[2 * m_val : 2 * m_val + 2, 2 * m_val : 2 * m_val + 2] = _ry_matrix(
                float(gate.angles[m_val])
            )
        axes = [_axis(num_qubits, q) for q in (gate.target,) + gate.controls]
        psi = _apply_on_axes(psi, big, axes)
    else:
        raise InputError(f"unknown gate type {type(gate).__name__}")
    return psi.reshape(-1)


def apply_circuit(state: np.ndarray, circuit: Circuit) -> np.ndarray:
    """Run every gate in order; returns a new statevector."""
    n = circuit.num_qubits
    state = np.asarray(state, dtype=complex)
    if state.shape != (2**n,):
        raise InputError(f"state dimension {state.shape} != ({2**n},)")
    out = state.copy()
    for gate in circuit.gates:
        out = apply_gate(out, gate, n)
    return out


class PostSelection(NamedTuple):
    state: np.ndarray
    probability: float


def post_select(state: np.ndarray, qubit: int, outcome: int) -> PostSelection:
    """Condition on ``qubit`` measuring ``outcome``.

    Returns the renormalized collapsed state (full width, the other branch
    zeroed) and the pre-collapse probability of that outcome.
    """
    if outcome not in (0, 1):
        raise InputError("outcome must be 0 or 1")
    n = int(math.log2(len(state)))
    if 2**n != len(state):
        raise InputError("state length is not a power of two")
    if not 0 <= qubit < n:
        raise InputError(f"qubit {qubit} out of range")
    psi = np.asarray(state, dtype=complex).reshape([2] * n)
    sel = [slice(None)] * n
    sel[_axis(n, qubit)] = outcome
    branch = psi[tuple(sel)]
    probability = float(np.sum(np.abs(branch) ** 2))
    if probability < MIN_POST_SELECT_PROB:
        raise PostSelectionError(
            f"outcome {outcome} on qubit {qubit} has probability "
            f"{probability:.3e} < {MIN_POST_SELECT_PROB}"
        )
    collapsed = np.zeros_like(psi)
    collapsed[tuple(sel)] = branch / math.sqrt(probability)
    return PostSelection(collapsed.reshape(-1), probability)
