"""Statevector circuit simulator: gates, execution, state preparation,
lowering to the CNOT + single-qubit basis, and circuit metrics."""

from qpf.qsim.circuit import (
    Circuit,
    Cnot,
    ControlledUnitary,
    Gate,
    SingleQubit,
    UniformlyControlledRy,
    dump,
    gate_qubits,
    h,
    invert_gate,
    parse,
    phase,
    ry,
    rz,
    x,
)
from qpf.qsim.lower import is_lowered, lower_to_basis
from qpf.qsim.metrics import CircuitMetrics, metrics
from qpf.qsim.prepare import prepare_state
from qpf.qsim.simulate import (
    PostSelection,
    apply_circuit,
    apply_gate,
    post_select,
    zero_state,
)

__all__ = [
    "Circuit",
    "CircuitMetrics",
    "Cnot",
    "ControlledUnitary",
    "Gate",
    "PostSelection",
    "SingleQubit",
    "UniformlyControlledRy",
    "apply_circuit",
    "apply_gate",
    "dump",
    "gate_qubits",
    "h",
    "invert_gate",
    "is_lowered",
    "lower_to_basis",
    "metrics",
    "parse",
    "phase",
    "post_select",
    "prepare_state",
    "ry",
    "rz",
    "x",
    "zero_state",
]
