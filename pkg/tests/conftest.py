import pytest

_CRITERIA = []


class _Recorder:
    def __init__(self, number, title):
        self.number = number
        self.title = title

    def check(self, ok, detail=""):
        _CRITERIA.append((self.number, self.title, bool(ok), detail))
        assert ok, f"criterion {self.number} ({self.title}) failed: {detail}"


@pytest.fixture
def criterion():
    return _Recorder


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, ok, detail in sorted(_CRITERIA, key=lambda r: r[0]):
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"[{status}] {number:>2}. {title}: {detail}")
