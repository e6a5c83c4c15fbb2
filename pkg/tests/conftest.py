import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("ckm", max_examples=60, deadline=None)
settings.load_profile("ckm")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[n])
