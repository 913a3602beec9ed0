import pytest

RESULTS: dict[int, tuple[str, str]] = {}


@pytest.fixture
def record():
    def _record(number: int, title: str, ok: bool, detail: str = "") -> None:
        RESULTS[number] = ("PASS" if ok else "FAIL", title + (f" ({detail})" if detail and not ok else ""))
        print(f"criterion {number}: {RESULTS[number][0]} {title}")

    return _record


def pytest_terminal_summary(terminalreporter):
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        status, title = RESULTS[n]
        terminalreporter.write_line(f"criterion {n}: {status} {title}")
