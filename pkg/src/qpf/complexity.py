"""Asymptotic cost models and the classical-vs-quantum crossover.

Classical (conjugate-gradient style):  n * s * k * log(1/eps)
Quantum (HHL style):                   log(n) * s^2 * k^2 / eps

Costs are unitless model units; the "constant_ratio" scales the quantum
model to account for per-unit-cost differences between the technologies.
Log bases are explicit because the crossover location depends on them; the
defaults (natural log for log(1/eps), base 2 for log(n)) are the pair that
reproduces the documented base speed ratio at n = 8.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from qpf.errors import InputError, NumericalError

_BASES = {"2": 2.0, "e": math.e, "10": 10.0}

SEARCH_RANGE = (2.0, 1.0e7)
BISECT_REL_TOL = 1e-6


@dataclass(frozen=True)
class ComplexityParams:
    s: float
    k: float
    epsilon: float
    log_n_base: str = "2"
    log_eps_base: str = "e"

    def __post_init__(self):
        if not self.s >= 1:
            raise InputError("sparsity s must be >= 1")
        if not self.k > 0:
            raise InputError("condition parameter k must be > 0")
        if not 0 < self.epsilon < 1:
            raise InputError("epsilon must lie in (0, 1)")
        for base in (self.log_n_base, self.log_eps_base):
            if base not in _BASES:
                raise InputError(f"log base {base!r} not one of {sorted(_BASES)}")


@dataclass(frozen=True)
class CrossoverReport:
    n_star: float
    constant_ratio: float
    convention: str
    samples: list[tuple[float, float, float]]


def _log(value: float, base: str) -> float:
    return math.log(value) / math.log(_BASES[base])


def _check_n(n: float) -> None:
    if not n >= 2:
        raise InputError("n must be >= 2")


def t_classical(n: float, p: ComplexityParams) -> float:
    _check_n(n)
    return n * p.s * p.k * _log(1.0 / p.epsilon, p.log_eps_base)


def t_quantum(n: float, p: ComplexityParams) -> float:
    _check_n(n)
    return _log(n, p.log_n_base) * p.s**2 * p.k**2 / p.epsilon


def base_speed_ratio(
    n: float, classical: ComplexityParams, quantum: ComplexityParams
) -> float:
    """Classical-to-quantum model cost ratio at dimension n.

    This is the per-unit-cost handicap the quantum side can carry while
    still breaking even at n.
    """
    return t_classical(n, classical) / t_quantum(n, quantum)


def _convention(classical: ComplexityParams, quantum: ComplexityParams) -> str:
    return (
        f"classical = n*s*k*log_{classical.log_eps_base}(1/eps); "
        f"quantum = log_{quantum.log_n_base}(n)*s^2*k^2/eps, "
        "scaled by constant_ratio"
    )


def find_crossover(
    classical: ComplexityParams,
    quantum: ComplexityParams,
    constant_ratio: float,
    samples: int = 200,
) -> CrossoverReport:
    """Bisection root of t_classical(n) = constant_ratio * t_quantum(n).

    Scans a log-spaced grid over [2, 1e7] for a sign change, then bisects to
    1e-6 relative tolerance.  Raises NumericalError when one model dominates
    the whole range.
    """
    if not constant_ratio > 0:
        raise InputError("constant_ratio must be positive")

    def gap(n: float) -> float:
        return constant_ratio * t_quantum(n, quantum) - t_classical(n, classical)

    lo_end, hi_end = SEARCH_RANGE
    grid = np.geomspace(lo_end, hi_end, max(int(samples), 16))
    values = [gap(n) for n in grid]
    bracket = None
    for left, right, f_left, f_right in zip(grid, grid[1:], values, values[1:]):
        if f_left == 0.0:
            bracket = (left, left)
            break
        if f_left * f_right < 0:
            bracket = (left, right)
            break
    if bracket is None:
        side = "classical" if values[0] < 0 else "quantum"
        raise NumericalError(
            f"no crossover in [{lo_end:g}, {hi_end:g}]: {side} model dominates"
        )

    lo, hi = bracket
    while hi - lo > BISECT_REL_TOL * 0.5 * (hi + lo):
        mid = 0.5 * (lo + hi)
        if gap(lo) * gap(mid) <= 0:
            hi = mid
        else:
            lo = mid
    n_star = 0.5 * (lo + hi)

    report_samples = [
        (float(n), t_classical(n, classical), constant_ratio * t_quantum(n, quantum))
        for n in grid
    ]
    return CrossoverReport(
        n_star=float(n_star),
        constant_ratio=float(constant_ratio),
        convention=_convention(classical, quantum),
        samples=report_samples,
    )


def sweep(
    classical: ComplexityParams,
    quantum: ComplexityParams,
    constant_ratio: float,
    n_range: tuple[float, float],
    steps: int,
) -> list[tuple[float, float, float]]:
    """Log-spaced cost samples (n, classical, scaled quantum) for plotting."""
    lo, hi = n_range
    if not (2 <= lo <= hi):
        raise InputError("need 2 <= lo <= hi")
    if steps < 1:
        raise InputError("steps must be >= 1")
    if steps == 1 or lo == hi:
        grid = [lo] if steps == 1 else [lo] * steps
    else:
        grid = np.geomspace(lo, hi, steps)
    return [
        (float(n), t_classical(n, classical), constant_ratio * t_quantum(n, quantum))
        for n in grid
    ]


def _sig6(value: float) -> str:
    return np.format_float_positional(
        value, precision=6, unique=False, fractional=False, trim="-"
    )


def sweep_csv(rows: list[tuple[float, float, float]]) -> str:
    """CSV serialization: 6 significant digits, decimal notation, LF newlines."""
    lines = ["n,classical_cost,quantum_cost_scaled"]
    for n, c_cost, q_cost in rows:
        lines.append(f"{_sig6(n)},{_sig6(c_cost)},{_sig6(q_cost)}")
    return "\n".join(lines) + "\n"
