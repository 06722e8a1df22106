"""Power-network model and classical DC power flow.

The DC approximation relates bus voltage angles to real-power injections
through a susceptance matrix built from branch reactances: B theta = p.
B has weighted-Laplacian structure (off-diagonal -1/x, diagonals the negated
row sums), so it is singular until the slack bus's row and column are
removed; the reduced matrix is symmetric positive definite for a connected
network with positive reactances and is solved by Cholesky factorization.

Injections are per-unit on the system MVA base, positive for generation and
negative for load.  The slack bus absorbs any imbalance and its injection
field is ignored.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np
import scipy.linalg

from qpf.errors import InputError, NumericalError


@dataclass(frozen=True)
class Bus:
    id: int
    slack: bool
    p_pu: float


@dataclass(frozen=True)
class Branch:
    from_bus: int
    to_bus: int
    x_pu: float


@dataclass(frozen=True)
class Network:
    base_mva: float
    buses: tuple[Bus, ...]
    branches: tuple[Branch, ...]

    @property
    def slack_id(self) -> int:
        return next(b.id for b in self.buses if b.slack)


@dataclass(frozen=True, eq=False)
class ReducedSystem:
    """The solvable SLE B theta = p, slack removed.

    Row i of ``b``/``p`` belongs to bus ``bus_order[i]``; ordering is
    ascending bus id with the slack bus dropped.
    """

    b: np.ndarray
    p: np.ndarray
    bus_order: tuple[int, ...]


@dataclass(frozen=True)
class NetworkStats:
    n: int
    s: int
    k_ratio: float
    eigenvalues: tuple[float, ...]


def _field_ok(value, kind) -> bool:
    if kind is bool:
        return isinstance(value, bool)
    if isinstance(value, bool):
        return False  # bool is an int subclass; never accept it as a number
    if kind is int:
        return isinstance(value, int)
    if kind is list:
        return isinstance(value, list)
    return isinstance(value, (int, float))  # generic number


def _require_keys(obj: dict, required: dict, where: str) -> None:
    missing = set(required) - set(obj)
    unknown = set(obj) - set(required)
    if missing:
        raise InputError(f"{where}: missing field(s) {sorted(missing)}")
    if unknown:
        raise InputError(f"{where}: unknown field(s) {sorted(unknown)}")
    for key, kind in required.items():
        if not _field_ok(obj[key], kind):
            raise InputError(f"{where}: field {key!r} has wrong type")


def network_from_dict(data: dict) -> Network:
    """Validate the JSON object form of a network (schema is strict)."""
    if not isinstance(data, dict):
        raise InputError("top level must be a JSON object")
    _require_keys(data, {"base_mva": (int, float), "buses": list, "branches": list},
                  "network")
    base_mva = float(data["base_mva"])
    if not base_mva > 0 or not np.isfinite(base_mva):
        raise InputError("base_mva must be positive and finite")

    buses = []
    for i, entry in enumerate(data["buses"]):
        if not isinstance(entry, dict):
            raise InputError(f"buses[{i}]: must be an object")
        _require_keys(entry, {"id": int, "slack": bool, "p_pu": (int, float)},
                      f"buses[{i}]")
        if entry["id"] < 1:
            raise InputError(f"buses[{i}]: id must be a positive integer")
        p_pu = float(entry["p_pu"])
        if not np.isfinite(p_pu):
            raise InputError(f"buses[{i}]: p_pu must be finite")
        buses.append(Bus(id=entry["id"], slack=entry["slack"], p_pu=p_pu))

    ids = [b.id for b in buses]
    if len(set(ids)) != len(ids):
        raise InputError("duplicate bus id")
    if len(buses) < 2:
        raise InputError("a network needs at least 2 buses")
    slack_count = sum(b.slack for b in buses)
    if slack_count == 0:
        raise InputError("no slack bus")
    if slack_count > 1:
        raise InputError("multiple slacks")

    known = set(ids)
    branches = []
    for i, entry in enumerate(data["branches"]):
        if not isinstance(entry, dict):
            raise InputError(f"branches[{i}]: must be an object")
        _require_keys(entry, {"from": int, "to": int, "x_pu": (int, float)},
                      f"branches[{i}]")
        f, t, x_pu = entry["from"], entry["to"], float(entry["x_pu"])
        if f not in known or t not in known:
            raise InputError(f"branches[{i}]: unknown bus id")
        if f == t:
            raise InputError(f"branches[{i}]: self-loop at bus {f}")
        if not x_pu > 0 or not np.isfinite(x_pu):
            raise InputError(f"branches[{i}]: reactance must be positive")
        branches.append(Branch(from_bus=f, to_bus=t, x_pu=x_pu))

    network = Network(base_mva=base_mva, buses=tuple(buses), branches=tuple(branches))
    if not _connected(network):
        raise InputError("network graph is disconnected")
    return network


def _connected(network: Network) -> bool:
    adjacency: dict[int, list[int]] = {b.id: [] for b in network.buses}
    for br in network.branches:
        adjacency[br.from_bus].append(br.to_bus)
        adjacency[br.to_bus].append(br.from_bus)
    seen = {network.buses[0].id}
    stack = [network.buses[0].id]
    while stack:
        for nxt in adjacency[stack.pop()]:
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return len(seen) == len(network.buses)


def parse_network(text: str) -> Network:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from exc
    return network_from_dict(data)


def load_network(path: str | Path) -> Network:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    return parse_network(text)


def load_fixture(name: str) -> Network:
    """Load a packaged test network (currently just ``wscc9``)."""
    ref = resources.files("qpf.data").joinpath(f"{name}.json")
    try:
        text = ref.read_text(encoding="utf-8")
    except FileNotFoundError as exc:
        raise InputError(f"unknown fixture {name!r}") from exc
    return parse_network(text)


def full_susceptance(network: Network) -> np.ndarray:
    """Unreduced weighted-Laplacian susceptance matrix, buses by ascending id."""
    order = sorted(b.id for b in network.buses)
    index = {bus_id: i for i, bus_id in enumerate(order)}
    n = len(order)
    b = np.zeros((n, n))
    for br in network.branches:
        w = 1.0 / br.x_pu
        i, j = index[br.from_bus], index[br.to_bus]
        b[i, i] += w
        b[j, j] += w
        b[i, j] -= w
        b[j, i] -= w
    return b


def build_reduced_system(network: Network) -> ReducedSystem:
    order = sorted(b.id for b in network.buses)
    full = full_susceptance(network)
    slack_id = network.slack_id
    keep = [i for i, bus_id in enumerate(order) if bus_id != slack_id]
    reduced = full[np.ix_(keep, keep)]
    injections = {b.id: b.p_pu for b in network.buses}
    bus_order = tuple(order[i] for i in keep)
    p = np.array([injections[bus_id] for bus_id in bus_order])
    return ReducedSystem(b=reduced, p=p, bus_order=bus_order)


def solve_dc(system: ReducedSystem) -> np.ndarray:
    """Bus voltage angles (radians) from a Cholesky solve of B theta = p."""
    try:
        factor = scipy.linalg.cho_factor(system.b)
    except (scipy.linalg.LinAlgError, ValueError) as exc:
        raise NumericalError(f"reduced matrix is not positive definite: {exc}") from exc
    theta = scipy.linalg.cho_solve(factor, system.p)
    residual = np.abs(system.b @ theta - system.p).max()
    bound = 1e-10 * max(1.0, np.abs(system.p).max())
    if residual > bound:
        raise NumericalError(f"solve residual {residual:.3e} exceeds {bound:.3e}")
    return theta


def network_stats(network: Network) -> NetworkStats:
    """System size n, row sparsity s, and spectral ratio of the reduced matrix."""
    system = build_reduced_system(network)
    eigenvalues = np.linalg.eigvalsh(system.b)
    s = int(np.max(np.count_nonzero(system.b, axis=1)))
    return NetworkStats(
        n=len(system.p),
        s=s,
        k_ratio=float(eigenvalues[0] / eigenvalues[-1]),
        eigenvalues=tuple(float(v) for v in eigenvalues),
    )
