import pytest

from cohortcap.domain import ClinicConfig, CohortPolicy, PenaltyWeights
from cohortcap.ingest import load_demand_csv

THREE = CohortPolicy.THREE_UNIT
TWO = CohortPolicy.TWO_UNIT


@pytest.fixture(scope="session")
def history():
    return load_demand_csv()


@pytest.fixture(scope="session")
def weights():
    return PenaltyWeights()


@pytest.fixture(scope="session")
def three_cfg():
    return ClinicConfig.for_policy(THREE)


@pytest.fixture(scope="session")
def two_cfg():
    return ClinicConfig.for_policy(TWO)


def pytest_terminal_summary(terminalreporter):
    """One PASS/FAIL line per acceptance criterion."""
    reports = [r for key in ("passed", "failed") for r in terminalreporter.stats.get(key, [])
               if r.when == "call" and "test_acceptance.py" in r.nodeid]
    if not reports:
        return
    terminalreporter.section("acceptance criteria")
    for r in sorted(reports, key=lambda r: r.location[1] or 0):
        props = dict(r.user_properties)
        name = props.get("criterion", r.nodeid.split("::")[-1])
        line = f"{'PASS' if r.passed else 'FAIL'}  {name}"
        if props.get("detail"):
            line += f"  [{props['detail']}]"
        terminalreporter.write_line(line)
