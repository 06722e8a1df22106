"""qpf: DC power flow solved classically and with a simulated HHL pipeline,
plus the asymptotic cost-model crossover analysis."""

__version__ = "0.1.0"

from qpf.complexity import (
    ComplexityParams,
    CrossoverReport,
    base_speed_ratio,
    find_crossover,
    sweep,
    t_classical,
    t_quantum,
)
from qpf.errors import InputError, NumericalError, PostSelectionError
from qpf.grid import (
    Branch,
    Bus,
    Network,
    NetworkStats,
    ReducedSystem,
    build_reduced_system,
    load_fixture,
    load_network,
    network_stats,
    parse_network,
    solve_dc,
)
from qpf.hhl import (
    EigenDecomposition,
    HHLConfig,
    HHLResult,
    SpectralScaling,
    build_qpe,
    build_reciprocal_rotation,
    choose_scaling,
    eigendecompose,
    epsilon_from_fidelity,
    fidelity,
    run_hhl,
)

__all__ = [
    "Branch",
    "Bus",
    "ComplexityParams",
    "CrossoverReport",
    "EigenDecomposition",
    "HHLConfig",
    "HHLResult",
    "InputError",
    "Network",
    "NetworkStats",
    "NumericalError",
    "PostSelectionError",
    "ReducedSystem",
    "SpectralScaling",
    "base_speed_ratio",
    "build_qpe",
    "build_reciprocal_rotation",
    "build_reduced_system",
    "choose_scaling",
    "eigendecompose",
    "epsilon_from_fidelity",
    "fidelity",
    "find_crossover",
    "load_fixture",
    "load_network",
    "network_stats",
    "parse_network",
    "run_hhl",
    "solve_dc",
    "sweep",
    "t_classical",
    "t_quantum",
]
