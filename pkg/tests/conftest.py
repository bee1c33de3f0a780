import pytest

CRITERIA = {}


@pytest.fixture
def criterion():
    """Record one acceptance-criterion outcome; the test still asserts on it."""

    def record(number, title, passed, detail=""):
        CRITERIA[number] = (title, bool(passed), detail)
        line = f"criterion {number}: {'PASS' if passed else 'FAIL'} - {title}"
        print(line + (f" ({detail})" if detail else ""))
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(CRITERIA):
        title, passed, detail = CRITERIA[number]
        line = f"criterion {number}: {'PASS' if passed else 'FAIL'} - {title}"
        terminalreporter.write_line(line + (f" ({detail})" if detail else ""))
