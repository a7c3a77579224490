import random

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "suite",
    max_examples=60,
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


@pytest.fixture
def rng():
    return random.Random(0xBEEF)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    try:
        from _criteria import LINES
    except ImportError:
        return
    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(LINES):
            terminalreporter.write_line(line)
