import sys
from pathlib import Path

import numpy as np
import pytest

from hausdorff_hyperspace import PointSet, SetSequence, kernels

sys.path.insert(0, str(Path(__file__).parent))

ACCEPTANCE_LINES = []


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(params=kernels.available_backends())
def backend(request):
    with kernels.use_backend(request.param):
        yield request.param


def reciprocal_sequence(N=200):
    """A_n = {1/n}, n = 1..N."""
    return SetSequence(tuple(PointSet([[1.0 / n]]) for n in range(1, N + 1)))


def alternating_sequence(N=200, A=((0.0,),), B=((5.0,), (6.0,))):
    """A, B, A, B, ... : bounded, not Cauchy."""
    return SetSequence(tuple(PointSet(A if n % 2 else B) for n in range(1, N + 1)))


def converging_sequence(rng, N=120, dim=2, k=None, rate=None, scale=None):
    """A_n = L + noise * rate**n around a random finite limit L; Cauchy by construction."""
    k = k or int(rng.integers(1, 5))
    rate = rate or float(rng.uniform(0.75, 0.92))
    scale = scale or float(rng.uniform(0.2, 1.0))
    L = rng.uniform(-3, 3, size=(k, dim))
    copies = int(rng.integers(1, 4))
    sets = []
    for n in range(1, N + 1):
        base = np.repeat(L, copies, axis=0)
        sets.append(PointSet(base + rng.normal(size=base.shape) * scale * rate ** n))
    return SetSequence(tuple(sets)), L


@pytest.fixture
def reciprocal():
    return reciprocal_sequence()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
