import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from losscap import load_example_records  # noqa: E402


@pytest.fixture(scope="session")
def bundled_records():
    return load_example_records()


@pytest.fixture(scope="session")
def rho_s():
    return 9743 / 274


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
