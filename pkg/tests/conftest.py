import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "repo", derandomize=True, deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("repo")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running certificate checks")


@pytest.fixture(scope="session")
def families():
    from schreiertrees.closure import standard_expr
    from schreiertrees.closure import dovetail_schedule
    from schreiertrees.trees import Code, MasterCodeFamily, PlainFamily, SingleD, SLFamily

    return {
        "plain3": PlainFamily(3),
        "plain5": PlainFamily(5),
        "singled": SingleD(""),
        "sl1": SLFamily(dovetail_schedule(standard_expr(1))),
        "sl2": SLFamily(dovetail_schedule(standard_expr(2))),
        "master_b": MasterCodeFamily(Code("", "b")),
        "master_bc": MasterCodeFamily(Code("", "bc")),
    }


_criteria: dict[int, tuple[str, str]] = {}


def pytest_runtest_logreport(report):
    head = report.nodeid.rsplit("::", 1)[-1]
    if "test_acceptance" not in report.nodeid or not head.startswith("test_criterion_"):
        return
    num = int(head.split("_")[2])
    outcome, label = _criteria.get(num, ("PASS", head))
    if report.failed:
        outcome = "FAIL"
    elif report.when == "call" and report.passed and outcome != "FAIL":
        outcome = "PASS"
    _criteria[num] = (outcome, head)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_criteria):
        outcome, head = _criteria[num]
        terminalreporter.write_line(f"{outcome} criterion {num:2d}  {head}")
