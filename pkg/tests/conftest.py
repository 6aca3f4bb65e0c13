import contextlib

import pytest

_RESULTS: list[tuple[int, str, str]] = []


@pytest.fixture
def criterion():
    """Record one acceptance criterion outcome; the summary prints them all."""

    @contextlib.contextmanager
    def record(number: int, title: str):
        try:
            yield
        except BaseException:
            _RESULTS.append((number, "FAIL", title))
            print(f"criterion {number}: FAIL  {title}")
            raise
        _RESULTS.append((number, "PASS", title))
        print(f"criterion {number}: PASS  {title}")

    return record


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, status, title in sorted(_RESULTS):
        terminalreporter.write_line(f"criterion {number}: {status}  {title}")
