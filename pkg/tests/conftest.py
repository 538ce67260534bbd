import os
import random
import shutil
import sys

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile(
    "repo", deadline=None, derandomize=True, max_examples=150,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("repo")

# acceptance outcomes, printed one line per criterion at the end of the run
CRITERIA: dict[int, str] = {}


def pytest_addoption(parser):
    parser.addoption("--seed", type=int, default=20261016,
                     help="seed for the randomized instance generators")


@pytest.fixture
def seed(request) -> int:
    return request.config.getoption("--seed")


@pytest.fixture
def rng(seed) -> random.Random:
    return random.Random(seed)


@pytest.fixture(scope="session")
def solver_available() -> bool:
    return shutil.which("z3") is not None


@pytest.fixture
def needs_solver(solver_available):
    if not solver_available:
        pytest.skip("z3 is not on PATH")


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        terminalreporter.write_line(CRITERIA[n])
