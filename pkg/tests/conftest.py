import pytest

_CRITERIA = []


@pytest.fixture
def criterion():
    """Record one pass/fail line for the terminal summary."""

    def record(label: str, ok: bool, detail: str = ""):
        _CRITERIA.append(f"{'PASS' if ok else 'FAIL'}  {label}  {detail}".rstrip())
        print(_CRITERIA[-1])

    return record


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in _CRITERIA:
            terminalreporter.write_line(line)
