import pytest

_ACCEPTANCE: dict[int, str] = {}


@pytest.fixture
def acceptance():
    """Record the one-line verdict for an acceptance criterion."""
    def record(number: int, passed: bool, detail: str) -> None:
        _ACCEPTANCE[number] = f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {detail}"
    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_ACCEPTANCE):
        terminalreporter.write_line(_ACCEPTANCE[n])
