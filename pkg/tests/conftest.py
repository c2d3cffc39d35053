import contextlib

import pytest

ACCEPTANCE_LINES = []


@pytest.fixture
def criterion():
    """Record a PASS/FAIL line for an acceptance criterion."""

    @contextlib.contextmanager
    def record(label):
        try:
            yield
        except BaseException as exc:
            ACCEPTANCE_LINES.append(f"FAIL  {label}: {type(exc).__name__}: {exc}".splitlines()[0])
            raise
        ACCEPTANCE_LINES.append(f"PASS  {label}")

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
