import pytest

from dynpart import DegenerateQubit, IsingOpenChain, ProductChain, SingleQubit, compile_model

ACCEPTANCE_LOG = []

ALL_SPECS = [
    SingleQubit(),
    DegenerateQubit(1),
    DegenerateQubit(2),
    DegenerateQubit(5),
    ProductChain(1),
    ProductChain(4),
    ProductChain(8),
    IsingOpenChain(2),
    IsingOpenChain(5),
    IsingOpenChain(12),
]


@pytest.fixture
def qubit():
    return compile_model(SingleQubit())


@pytest.fixture
def degenerate():
    return compile_model(DegenerateQubit(2))


@pytest.fixture(params=ALL_SPECS, ids=repr)
def any_model(request):
    return compile_model(request.param)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LOG:
        return
    terminalreporter.section("acceptance criteria")
    for number, passed, text in sorted(ACCEPTANCE_LOG):
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] {number:2d}. {text}")
