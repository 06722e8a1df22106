"""Lowering of arbitrary gates to the {CNOT, single-qubit} basis.

Chain: ControlledUnitary -> two-level (Givens) decomposition over the gate's
local qubits -> Gray-code multi-controlled single-qubit rotations -> standard
CNOT ladder identities (ZYZ for one control, square-root recursion for more).
UniformlyControlledRy uses the exact 2^k CNOT + 2^k Ry ladder.

Gate counts here are generic-decomposition counts, not optimized-transpiler
counts; correctness (unitary equivalence to 1e-8) is the contract.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from qpf.errors import InputError
from qpf.qsim.circuit import (
    Circuit,
    Cnot,
    ControlledUnitary,
    Gate,
    SingleQubit,
    UniformlyControlledRy,
    phase,
    ry,
    rz,
    x,
)

_ELIM_TOL = 1e-14  # entries below this need no Givens rotation
_ANGLE_TOL = 1e-12  # rotations/phases below this are dropped


def lower_to_basis(circuit: Circuit) -> Circuit:
    """Rewrite a circuit using only Cnot and SingleQubit gates."""
    out = Circuit(circuit.num_qubits)
    for gate in circuit.gates:
        if isinstance(gate, (SingleQubit, Cnot)):
            out.append(gate)
        elif isinstance(gate, UniformlyControlledRy):
            out.extend(_lower_ucry(gate))
        elif isinstance(gate, ControlledUnitary):
            out.extend(_lower_cu(gate))
        else:
            raise InputError(f"unknown gate type {type(gate).__name__}")
    return out


def is_lowered(circuit: Circuit) -> bool:
    return all(isinstance(g, (SingleQubit, Cnot)) for g in circuit.gates)


# -- uniformly controlled Ry -------------------------------------------------


def _gray(i: int) -> int:
    return i ^ (i >> 1)


def _lower_ucry(gate: UniformlyControlledRy) -> list[Gate]:
    k = len(gate.controls)
    if k == 0:
        return [ry(gate.target, float(gate.angles[0]))]
    size = 2**k
    # Ladder angles: theta = 2^-k * H * angles with H_ij = (-1)^(gray(i).j).
    theta = np.empty(size)
    for i in range(size):
        signs = [(-1) ** bin(_gray(i) & j).count("1") for j in range(size)]
        theta[i] = np.dot(signs, gate.angles) / size
    gates: list[Gate] = []
    for i in range(size):
        gates.append(ry(gate.target, float(theta[i])))
        if i < size - 1:
            ctrl_bit = ((i + 1) & -(i + 1)).bit_length() - 1  # trailing zeros of i+1
        else:
            ctrl_bit = k - 1  # closing CNOT returns flip parity to zero
        gates.append(Cnot(gate.controls[ctrl_bit], gate.target))
    return gates


# -- controlled unitary ------------------------------------------------------


def _lower_cu(gate: ControlledUnitary) -> list[Gate]:
    # Local register: targets first (low bits), controls above them, so the
    # active block of the embedded unitary is the trailing diagonal block.
    local = list(gate.targets) + list(gate.controls)
    m, k = len(gate.targets), len(gate.controls)
    dim = 2 ** (m + k)
    w = np.eye(dim, dtype=complex)
    base = gate.pattern << m
    w[base : base + 2**m, base : base + 2**m] = gate.u
    rotations, phases = _two_level_decompose(w)
    gates: list[Gate] = []
    for idx, phi in phases:
        gates.extend(_one_level_phase(idx, phi, local))
    for i1, i2, v in reversed(rotations):
        gates.extend(_two_level_gates(i1, i2, v.conj().T, local))
    return gates


def _two_level_decompose(w: np.ndarray):
    """Reduce w to diagonal by Givens rotations acting on index pairs.

    Returns (rotations, phases) with w == T1+ T2+ ... TL+ D: each rotation
    (i1, i2, g) is the 2x2 block g that was applied from the left on rows
    (i1, i2), and D holds the leftover unit-modulus diagonal phases.
    """
    a = np.array(w, dtype=complex)
    dim = len(a)
    rotations = []
    for col in range(dim - 1):
        for row in range(dim - 1, col, -1):
            if abs(a[row, col]) <= _ELIM_TOL:
                continue
            pivot, below = a[col, col], a[row, col]
            norm = math.hypot(abs(pivot), abs(below))
            g = np.array(
                [[pivot.conjugate() / norm, below.conjugate() / norm],
                 [-below / norm, pivot / norm]],
                dtype=complex,
            )
            a[[col, row], :] = g @ a[[col, row], :]
            rotations.append((col, row, g))
    phases = []
    for i in range(dim):
        phi = cmath.phase(a[i, i])
        if abs(phi) > _ANGLE_TOL:
            phases.append((i, phi))
    return rotations, phases


def _bits_of(value: int, width: int) -> list[int]:
    return [(value >> b) & 1 for b in range(width)]


def _mcx_on_state(state: int, flip_bit: int, local: list[int]) -> list[Gate]:
    """X on local bit ``flip_bit`` conditioned on every other bit of ``state``."""
    controls = [b for b in range(len(local)) if b != flip_bit]
    pattern = [(state >> b) & 1 for b in controls]
    return _mc_single(
        np.array([[0, 1], [1, 0]], dtype=complex),
        [local[b] for b in controls],
        pattern,
        local[flip_bit],
    )


def _two_level_gates(i1: int, i2: int, v: np.ndarray, local: list[int]) -> list[Gate]:
    """Gates applying the 2x2 ``v`` on basis span {|i1>, |i2>} of the local bits."""
    width = len(local)
    diff_bits = [b for b in range(width) if (i1 ^ i2) >> b & 1]
    last = diff_bits[-1]
    # Walk |i1> to the neighbour of |i2> across the other differing bits.
    walk: list[Gate] = []
    state = i1
    for b in diff_bits[:-1]:
        walk.extend(_mcx_on_state(state, b, local))
        state ^= 1 << b
    # Now state == i2 ^ (1 << last).  The 2x2 acts on local bit ``last`` with
    # all other bits pinned to i2's values; if i2 has bit ``last`` = 0 the
    # (i1, i2) ordering is the reversed qubit basis, so conjugate by X.
    u = v if (i2 >> last) & 1 else np.array([[0, 1], [1, 0]]) @ v @ np.array([[0, 1], [1, 0]])
    controls = [b for b in range(width) if b != last]
    pattern = [(i2 >> b) & 1 for b in controls]
    core = _mc_single(u, [local[b] for b in controls], pattern, local[last])
    return walk + core + _invert_list(walk)


def _one_level_phase(idx: int, phi: float, local: list[int]) -> list[Gate]:
    """diag phase e^{i phi} on basis state |idx> of the local bits."""
    width = len(local)
    if width == 1:
        u = np.diag([1.0, cmath.exp(1j * phi)] if idx else [cmath.exp(1j * phi), 1.0])
        return [SingleQubit(local[0], u)]
    controls = list(range(1, width))
    pattern = [(idx >> b) & 1 for b in controls]
    if idx & 1:
        u = np.diag([1.0, cmath.exp(1j * phi)]).astype(complex)
    else:
        u = np.diag([cmath.exp(1j * phi), 1.0]).astype(complex)
    return _mc_single(u, [local[b] for b in controls], pattern, local[0])


def _invert_list(gates: list[Gate]) -> list[Gate]:
    from qpf.qsim.circuit import invert_gate

    return [invert_gate(g) for g in reversed(gates)]


# -- multi-controlled single-qubit gates ------------------------------------


def _mc_single(
    u: np.ndarray, controls: list[int], pattern: list[int], target: int
) -> list[Gate]:
    """Lower u-on-target with (control, required-bit) conditions to the basis."""
    wraps = [x(c) for c, bit in zip(controls, pattern) if bit == 0]
    return wraps + _mc_ones(u, controls, target) + wraps


def _mc_ones(u: np.ndarray, controls: list[int], target: int) -> list[Gate]:
    if np.abs(u - np.eye(2)).max() < _ANGLE_TOL:
        return []
    if not controls:
        return _single(u, target)
    if len(controls) == 1:
        return _controlled_single(u, controls[0], target)
    v = _sqrt_2x2(u)
    c_last, rest = controls[-1], list(controls[:-1])
    x_mat = np.array([[0, 1], [1, 0]], dtype=complex)
    gates = _controlled_single(v, c_last, target)
    gates += _mc_ones(x_mat, rest, c_last)
    gates += _controlled_single(v.conj().T, c_last, target)
    gates += _mc_ones(x_mat, rest, c_last)
    gates += _mc_ones(v, rest, target)
    return gates


def _single(u: np.ndarray, target: int) -> list[Gate]:
    alpha, beta, gamma, delta = _zyz(u)
    gates: list[Gate] = []
    if abs(delta) > _ANGLE_TOL:
        gates.append(rz(target, delta))
    if abs(gamma) > _ANGLE_TOL:
        gates.append(ry(target, gamma))
    if abs(beta) > _ANGLE_TOL:
        gates.append(rz(target, beta))
    if abs(alpha) > _ANGLE_TOL:
        # Global phase is observable once the gate is later controlled, so
        # carry it as an explicit diagonal gate.
        gates.append(SingleQubit(target, np.eye(2) * cmath.exp(1j * alpha)))
    if not gates:
        gates.append(SingleQubit(target, np.eye(2, dtype=complex)))
    return gates


def _controlled_single(u: np.ndarray, control: int, target: int) -> list[Gate]:
    """ABC identity: C-U = P(alpha)_c . A . CNOT . B . CNOT . C with ABC = I."""
    alpha, beta, gamma, delta = _zyz(u)
    gates: list[Gate] = []
    if abs(delta - beta) > _ANGLE_TOL:
        gates.append(rz(target, (delta - beta) / 2))
    gates.append(Cnot(control, target))
    if abs(delta + beta) > _ANGLE_TOL:
        gates.append(rz(target, -(delta + beta) / 2))
    if abs(gamma) > _ANGLE_TOL:
        gates.append(ry(target, -gamma / 2))
    gates.append(Cnot(control, target))
    if abs(gamma) > _ANGLE_TOL:
        gates.append(ry(target, gamma / 2))
    if abs(beta) > _ANGLE_TOL:
        gates.append(rz(target, beta))
    if abs(alpha) > _ANGLE_TOL:
        gates.append(phase(control, alpha))
    return gates


def _zyz(u: np.ndarray):
    """Angles (alpha, beta, gamma, delta) with u = e^{i alpha} Rz(beta) Ry(gamma) Rz(delta)."""
    det = u[0, 0] * u[1, 1] - u[0, 1] * u[1, 0]
    alpha = cmath.phase(det) / 2
    v = u * cmath.exp(-1j * alpha)
    gamma = 2.0 * math.atan2(abs(v[1, 0]), abs(v[0, 0]))
    if abs(v[1, 0]) < 1e-14:
        beta, delta = 2.0 * cmath.phase(v[1, 1]), 0.0
    elif abs(v[0, 0]) < 1e-14:
        beta, delta = 2.0 * cmath.phase(v[1, 0]), 0.0
    else:
        beta = cmath.phase(v[1, 1]) + cmath.phase(v[1, 0])
        delta = cmath.phase(v[1, 1]) - cmath.phase(v[1, 0])
    return alpha, beta, gamma, delta


def _sqrt_2x2(u: np.ndarray) -> np.ndarray:
    """Principal square root of a 2x2 unitary."""
    if abs(u[0, 1]) < 1e-15 and abs(u[1, 0]) < 1e-15:
        return np.diag([cmath.exp(1j * cmath.phase(u[0, 0]) / 2) * math.sqrt(abs(u[0, 0])),
                        cmath.exp(1j * cmath.phase(u[1, 1]) / 2) * math.sqrt(abs(u[1, 1]))])
    vals, vecs = np.linalg.eig(u)
    roots = np.array([cmath.exp(1j * cmath.phase(lam) / 2) for lam in vals])
    return (vecs * roots) @ np.linalg.inv(vecs)
