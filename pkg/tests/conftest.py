import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

_results: dict[int, tuple[str, list[bool]]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion a test belongs to")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    for key, value in report.user_properties:
        if key == "criterion":
            num, title = value
            entry = _results.setdefault(num, (title, []))
            entry[1].append("skipped" if report.skipped else report.passed)


def pytest_runtest_setup(item):
    mark = item.get_closest_marker("criterion")
    if mark is not None:
        item.user_properties.append(("criterion", tuple(mark.args)))


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_results):
        title, outcomes = _results[num]
        if all(o == "skipped" for o in outcomes):
            status = "SKIP"
        else:
            status = "PASS" if all(o is True or o == "skipped" for o in outcomes) else "FAIL"
        terminalreporter.write_line(f"criterion {num}: {status}  {title}")
