from functools import lru_cache

import pytest

from weilrep.fields import field_config
from weilrep.ring import RingConfig


@lru_cache(maxsize=None)
def make_ring(p: int, t: int, n: int) -> RingConfig:
    return RingConfig(field_config(p, t), n)


@pytest.fixture
def R31():
    return make_ring(3, 1, 1)


@pytest.fixture
def R32():
    return make_ring(3, 1, 2)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
