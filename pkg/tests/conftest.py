import numpy as np
import pytest
from hypothesis import settings

from sublocal.spaces import ChannelShape

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


def seeded_shape(seed: int, max_dim: int = 3) -> ChannelShape:
    """Shape with every block dimension drawn from 1..max_dim."""
    rng = np.random.default_rng([seed, 7919])
    return ChannelShape.from_dims(*(int(d) for d in rng.integers(1, max_dim + 1, size=4)))


def dephasing_kraus():
    return (np.diag([1.0, 0.0]), np.diag([0.0, 1.0]))


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


ACCEPTANCE_LINES: list[str] = []


def record_criterion(number: int, title: str, ok: bool, detail: str) -> None:
    line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
