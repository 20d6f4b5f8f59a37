import os

import pytest

from weylmod.waves import GridSpec

# criterion number -> list of (passed, detail)
ACCEPTANCE_LINES = {}


@pytest.fixture(scope="session")
def grid32():
    return GridSpec(2.5, 32)


@pytest.fixture(scope="session")
def grid48():
    return GridSpec(2.5, 48)


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance: end-to-end acceptance criteria")
    os.environ.setdefault("WEYLMOD_THREADS", "max")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for criterion in sorted(ACCEPTANCE_LINES):
        parts = ACCEPTANCE_LINES[criterion]
        status = "PASS" if all(ok for ok, _ in parts) else "FAIL"
        terminalreporter.write_line(
            f"criterion {criterion}: {status}  " + "; ".join(d for _, d in parts))
