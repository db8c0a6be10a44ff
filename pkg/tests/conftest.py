import itertools

import numpy as np
import pytest

from subsec import kernels
from subsec.oracles import CoverageOracle, CutOracle, ModularOracle

ACCEPTANCE_LINES = []


def pytest_addoption(parser):
    parser.addoption("--kernel-backend", choices=["cython", "python"], default=None,
                     help="force a kernel backend for the whole session")


def pytest_configure(config):
    name = config.getoption("--kernel-backend")
    if name:
        kernels.use_backend(name)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section(f"acceptance criteria (kernel backend: {kernels.BACKEND})")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(params=sorted(kernels.BACKENDS))
def backend(request):
    previous = kernels.BACKEND
    kernels.use_backend(request.param)
    yield request.param
    kernels.use_backend(previous)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def all_subsets(n):
    for r in range(n + 1):
        yield from itertools.combinations(range(n), r)


@pytest.fixture
def modular312():
    return ModularOracle([3, 1, 2])


@pytest.fixture
def single_edge():
    return CutOracle(2, [(0, 1, 2.0)])


@pytest.fixture
def triangle():
    return CutOracle(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)])


@pytest.fixture
def coverage_xyz():
    return CoverageOracle([["x", "y"], ["y", "z"]])
