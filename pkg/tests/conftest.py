import pytest

_criteria: dict[int, list[str]] = {}
_measured: dict[int, list[str]] = {}


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None or call.when != "call":
        return
    number = marker.args[0]
    outcome = "PASS" if call.excinfo is None else "FAIL"
    _criteria.setdefault(number, []).append(f"{outcome} {item.name}")


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        results = _criteria[number]
        verdict = "PASS" if all(r.startswith("PASS") for r in results) else "FAIL"
        failed = [r[5:] for r in results if r.startswith("FAIL")]
        detail = f"  (failed: {', '.join(failed)})" if failed else ""
        terminalreporter.write_line(f"criterion {number}: {verdict}  [{len(results)} checks]{detail}")
        for note in _measured.get(number, []):
            terminalreporter.write_line(f"    {note}")


@pytest.fixture
def measured(request):
    """Attach a measured value to the summary line of the test's criterion."""
    marker = request.node.get_closest_marker("criterion")
    number = marker.args[0] if marker else 0

    def note(text):
        _measured.setdefault(number, []).append(text)

    return note


@pytest.fixture
def rng():
    import numpy as np

    return np.random.default_rng(12345)
