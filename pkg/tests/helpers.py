"""Shared test oracles, independent of the package's execution paths.

The dense-matrix builders below work purely with index bit arithmetic so
they cannot share bugs with the tensor-contraction code under test.
"""

from __future__ import annotations

import numpy as np

from qpf.grid import ReducedSystem
from qpf.qsim import (
    Circuit,
    Cnot,
    ControlledUnitary,
    SingleQubit,
    UniformlyControlledRy,
)
from qpf.qsim.circuit import _ry_matrix


def dense_gate(gate, n: int) -> np.ndarray:
    """Brute-force 2^n x 2^n matrix of a single gate."""
    size = 2**n
    mat = np.zeros((size, size), dtype=complex)
    if isinstance(gate, SingleQubit):
        _embed_single(mat, gate.u, gate.target)
    elif isinstance(gate, Cnot):
        for col in range(size):
            row = col ^ (1 << gate.target) if (col >> gate.control) & 1 else col
            mat[row, col] = 1.0
    elif isinstance(gate, ControlledUnitary):
        m = len(gate.targets)
        for col in range(size):
            ctrl_val = sum(((col >> c) & 1) << i for i, c in enumerate(gate.controls))
            if ctrl_val != gate.pattern:
                mat[col, col] += 1.0
                continue
            t_in = sum(((col >> t) & 1) << i for i, t in enumerate(gate.targets))
            base = col
            for t in gate.targets:
                base &= ~(1 << t)
            for t_out in range(2**m):
                row = base
                for i, t in enumerate(gate.targets):
                    row |= ((t_out >> i) & 1) << t
                mat[row, col] += gate.u[t_out, t_in]
    elif isinstance(gate, UniformlyControlledRy):
        for col in range(size):
            ctrl_val = sum(((col >> c) & 1) << i for i, c in enumerate(gate.controls))
            u = _ry_matrix(float(gate.angles[ctrl_val]))
            bit = (col >> gate.target) & 1
            for out in (0, 1):
                row = (col & ~(1 << gate.target)) | (out << gate.target)
                mat[row, col] += u[out, bit]
    else:
        raise TypeError(type(gate).__name__)
    return mat


def _embed_single(mat: np.ndarray, u: np.ndarray, target: int) -> None:
    for col in range(len(mat)):
        bit = (col >> target) & 1
        for out in (0, 1):
            row = (col & ~(1 << target)) | (out << target)
            mat[row, col] += u[out, bit]


def dense_circuit(circuit: Circuit) -> np.ndarray:
    mat = np.eye(2**circuit.num_qubits, dtype=complex)
    for gate in circuit.gates:
        mat = dense_gate(gate, circuit.num_qubits) @ mat
    return mat


def random_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))


def random_circuit(rng: np.random.Generator, n: int, length: int) -> Circuit:
    """Random circuit mixing every gate kind (patterns included)."""
    circuit = Circuit(n)
    for _ in range(length):
        kind = int(rng.integers(0, 4))
        qs = [int(q) for q in rng.permutation(n)]
        if kind == 0 or n == 1:
            circuit.append(SingleQubit(qs[0], random_unitary(rng, 2)))
        elif kind == 1:
            circuit.append(Cnot(qs[0], qs[1]))
        elif kind == 2:
            n_targets = int(rng.integers(1, n))
            n_controls = int(rng.integers(0, n - n_targets + 1))
            targets = tuple(qs[:n_targets])
            controls = tuple(qs[n_targets : n_targets + n_controls])
            pattern = int(rng.integers(0, 2**n_controls))
            circuit.append(
                ControlledUnitary(
                    controls, targets, random_unitary(rng, 2**n_targets), pattern
                )
            )
        else:
            n_controls = int(rng.integers(0, n))
            angles = rng.uniform(-2 * np.pi, 2 * np.pi, size=2**n_controls)
            circuit.append(
                UniformlyControlledRy(tuple(qs[1 : 1 + n_controls]), qs[0], angles)
            )
    return circuit


def exact_grid_system(
    rng: np.random.Generator, dim: int, alpha: int
) -> ReducedSystem:
    """Random SPD system whose spectrum sits exactly on the clock grid.

    The default scaling maps lambda_max to clock integer 2^alpha - 1, so
    eigenvalues m * lambda_max / (2^alpha - 1) with integer m (and m_max =
    2^alpha - 1 present) are all exactly representable.
    """
    top = 2**alpha - 1
    scale = float(rng.uniform(0.5, 50.0))
    m_values = [int(v) for v in rng.integers(1, top, size=dim - 1)] + [top]
    lambdas = np.array(sorted(m_values)) * scale / top
    basis, _ = np.linalg.qr(rng.normal(size=(dim, dim)))
    b = basis @ np.diag(lambdas) @ basis.T
    p = rng.normal(size=dim)
    p /= np.linalg.norm(p)
    return ReducedSystem(b=b, p=p, bus_order=tuple(range(2, dim + 2)))
