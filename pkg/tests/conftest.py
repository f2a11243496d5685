"""Collects acceptance outcomes and prints one line per criterion at the end of the run."""
import re

_CRITERIA: dict[int, tuple[str, float]] = {}


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)", report.nodeid)
    if not m:
        return
    num = int(m.group(1))
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _CRITERIA[num] = ("PASS" if report.passed else "FAIL", report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        verdict, secs = _CRITERIA[num]
        terminalreporter.write_line(f"criterion {num:2d}: {verdict} ({secs:.1f} s)")
