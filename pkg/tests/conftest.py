import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from pkeetfa import scheme  # noqa: E402
from pkeetfa.params import preset  # noqa: E402
from pkeetfa.ring import get_ring  # noqa: E402
from pkeetfa.rng import Rng  # noqa: E402

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def paper62():
    return preset("paper62")


@pytest.fixture(scope="session")
def toy17():
    return preset("toy17")


@pytest.fixture(scope="session")
def ring62(paper62):
    return get_ring(paper62.n, paper62.q)


@pytest.fixture(scope="session")
def ring17(toy17):
    return get_ring(toy17.n, toy17.q)


@pytest.fixture(scope="session")
def users62(paper62):
    """Two independent key pairs at paper62."""
    rng = Rng("fixture/users62")
    return [scheme.setup(paper62, rng) for _ in range(2)]


@pytest.fixture
def rng(request):
    return Rng(f"test/{request.node.nodeid}")


def random_message(rng, n):
    return rng.words(n) & np.uint64(1)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
