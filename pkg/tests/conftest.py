import numpy as np
import pytest

from qpf.grid import build_reduced_system, load_fixture
from qpf.hhl import HHLConfig, run_hhl


@pytest.fixture(scope="session")
def wscc9():
    return load_fixture("wscc9")


@pytest.fixture(scope="session")
def wscc9_system(wscc9):
    return build_reduced_system(wscc9)


@pytest.fixture(scope="session")
def wscc9_hhl(wscc9_system):
    """One shared alpha=5 run; the circuit is large, so build it once."""
    return run_hhl(wscc9_system, HHLConfig(alpha=5))


@pytest.fixture
def rng():
    return np.random.default_rng(20260825)
