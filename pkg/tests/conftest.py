import pytest

ACCEPTANCE_LINES: dict[str, str] = {}


@pytest.fixture
def report():
    """Record the one-line outcome of an acceptance criterion."""

    def record(key: str, passed: bool, detail: str) -> bool:
        ACCEPTANCE_LINES[key] = f"{key}: {'PASS' if passed else 'FAIL'}  {detail}"
        print(ACCEPTANCE_LINES[key])
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES, key=lambda k: (int(k.split()[1].rstrip("abcdefg")), k)):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
