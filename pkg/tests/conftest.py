import pytest

CRITERIA = {
    1: "point axiom over Z, Q, F_p, Z/m",
    2: "sphere homology n = 1..4 over Z, F_2, Z/6",
    3: "degree of wrap maps and multiplicativity",
    4: "skeletal filtrations are good",
    5: "cellular homology equals direct homology",
    6: "cellular boundary squares to zero",
    7: "Mayer-Vietoris exactness and naturality",
    8: "excision isomorphisms on corpus covers",
    9: "homotopy invariance via cylinders",
    10: "additivity (gamma and kappa)",
    11: "coefficients agree with the UCT oracle",
    12: "finite spaces via order complexes",
    13: "property suite (SNF, functoriality, exactness)",
}

_outcomes: dict[int, list[bool]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number exercised by the test")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    for n in report.user_properties_criteria if hasattr(report, "user_properties_criteria") else ():
        _outcomes.setdefault(n, []).append(report.passed)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    report.user_properties_criteria = [m.args[0] for m in item.iter_markers("criterion")]


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for n, title in CRITERIA.items():
        runs = _outcomes.get(n)
        if runs is None:
            status = "NOT RUN"
        else:
            status = "PASS" if all(runs) else "FAIL"
        terminalreporter.write_line(f"AC{n:<3} {status:<8} {title}")
