import pytest

_CRITERIA = {}


@pytest.fixture
def record():
    """record(number, title, passed, detail) stores one acceptance outcome."""
    def _record(number, title, passed, detail=""):
        _CRITERIA[number] = (title, bool(passed), detail)
        return bool(passed)
    return _record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, passed, detail = _CRITERIA[number]
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{status}] criterion {number}: {title}  ({detail})")
