import pytest

from gaussradau.weights import Constant, ExpDecay, Jacobi, PiecewiseLinearTable

ACCEPTANCE_LINES: list[str] = []

FAMILIES = {
    "constant": Constant(),
    "exp0": ExpDecay(1.0, 0.0),
    "exp0.5": ExpDecay(1.0, 0.5),
    "exp1": ExpDecay(1.0, 1.0),
    "exp2": ExpDecay(1.0, 2.0),
    "exp5": ExpDecay(1.0, 5.0),
    "jacobi(0.5,0)": Jacobi(0.5, 0.0),
    "table3": PiecewiseLinearTable((-1.0, 0.2, 1.0), (1.0, 2.5, 0.7)),
}


@pytest.fixture(params=sorted(FAMILIES), ids=sorted(FAMILIES))
def family(request):
    return FAMILIES[request.param]


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
