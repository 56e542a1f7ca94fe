import pytest
from hypothesis import settings

from ndopacity.fixture import reconstruct_fixture
from ndopacity.infostate import decision, macro, micro
from ndopacity.plant import Plant
from ndopacity.synthesis import IsMapping

settings.register_profile("repro", derandomize=True, deadline=None)
settings.load_profile("repro")


@pytest.fixture(scope="session")
def fig1() -> Plant:
    return reconstruct_fixture()


@pytest.fixture(scope="session")
def theta_star() -> IsMapping:
    """The five-entry mapping expected from synthesis on the running example."""
    y0 = macro(["0"])
    y1 = macro(["4"], ["5"])
    return IsMapping("paper-fig1", {
        (micro("0"), y0): {decision("c1"), decision("c2")},
        (micro("4"), y1): {decision()},
        (micro("5"), y1): {decision("c1", "c2")},
        (micro("9", "10"), macro(["9", "10"])): {decision()},
        (micro("10", "11"), macro(["10", "11"])): {decision()},
    })


@pytest.fixture(scope="session")
def reveal2() -> Plant:
    """x0 emits an uncontrollable observable event into a secret state."""
    return Plant.build("reveal2", [("x0", "o", "xs")], initial="x0",
                       observable=["o"], controllable=[], secret=["xs"])


@pytest.fixture(scope="session")
def parity_plant() -> Plant:
    return Plant.build(
        "parity4",
        [("0", "o", "0"), ("0", "c1", "1"), ("0", "c2", "2"),
         ("1", "o", "3"), ("2", "o", "3"), ("3", "o", "0")],
        initial="0", observable=["o"], controllable=["c1", "c2"], secret=["1", "2"],
    )


def pytest_terminal_summary(terminalreporter):
    from tests.acceptance_log import LINES
    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(LINES, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
