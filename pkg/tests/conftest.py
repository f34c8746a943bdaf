import pytest

from rkaczmarz import RngStream

#: one ``(number, title, passed, detail)`` entry per acceptance criterion run
ACCEPTANCE_LINES = []


@pytest.fixture
def rng():
    return RngStream(20240601)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, passed, detail in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] {number:2d}. {title}: {detail}")
