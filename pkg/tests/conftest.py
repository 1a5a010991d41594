from __future__ import annotations

import pytest

from latvortex import VortexConfig, box_domain, solve_cs_exhaustion, solve_cs_on_domain

CRITERIA = {
    1: "oracle equivalence (5x5, 7x7)",
    2: "closed-form singleton iterate",
    3: "monotone descent",
    4: "energy descent with quantitative gap",
    5: "flux identity (41x41, CS and AH)",
    6: "tail bound",
    7: "domain monotonicity and stabilization",
    8: "decay rate (81x81, annulus [15, 30])",
    9: "sandwich and uniqueness",
    10: "inequality batteries",
    11: "determinism",
}

_outcomes: dict[int, list[bool]] = {}


def pytest_runtest_logreport(report):
    crit = getattr(report, "criterion", None)
    if crit is None:
        return
    if report.when == "call" or report.failed:
        _outcomes.setdefault(crit, []).append(report.passed)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        outcome.get_result().criterion = marker.args[0]


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for n, title in CRITERIA.items():
        results = _outcomes.get(n)
        if results is None:
            status = "NOT RUN"
        else:
            status = "PASS" if all(results) else "FAIL"
        terminalreporter.write_line(f"[{status}] criterion {n:2d}: {title}")


@pytest.fixture(scope="session")
def single2():
    return VortexConfig.single(dim=2, lam=1.0)


@pytest.fixture(scope="session")
def cs_small(single2):
    return solve_cs_on_domain(single2, box_domain((0, 0), 5))


@pytest.fixture(scope="session")
def cs_exhaustion(single2):
    return solve_cs_exhaustion(single2, (10, 20, 40))
