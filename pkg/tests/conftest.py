import pytest

_CRITERIA: dict[int, dict] = {}


def pytest_runtest_logreport(report):
    marks = getattr(report, "criterion", None)
    if not marks or report.when not in ("setup", "call"):
        return
    number, text = marks
    entry = _CRITERIA.setdefault(number, {"text": text, "ok": True, "n": 0})
    if report.when == "call":
        entry["n"] += 1
    if report.failed:
        entry["ok"] = False


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    mark = item.get_closest_marker("criterion")
    if mark is not None:
        outcome.get_result().criterion = tuple(mark.args)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        e = _CRITERIA[number]
        status = "PASS" if e["ok"] and e["n"] else "FAIL"
        terminalreporter.write_line(f"criterion {number}: {status}  {e['text']}")
