import pytest

import pilotwave as pw

# verdict lines collected by the acceptance tests, echoed after the run so
# they survive output capture
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.line(line)


# frozen reference constants for xi = 4, hbar = M = beta = 1
ALPHA_MINUS = 6.928203230275509   # 2 sqrt(12)
ALPHA_PLUS = 10.583005244258363   # 2 sqrt(28)
EPSILONS = (
    -15.928203230275509,
    -11.583005244258363,
    -2.0717967697244912,
    9.583005244258363,
)
OMEGA_30 = 12.755604237266937     # (E3 - E0)/hbar
OMEGA_31 = ALPHA_PLUS             # (E3 - E1)/hbar, algebraic identity
F_10 = 0.34577986909378855        # (E1 - E0)/(2 pi hbar)
F_21 = 0.7568779217497955         # (E2 - E1)/(2 pi hbar)
X_MIN = 0.6584789484624083        # ln(2 + sqrt(3))/2


@pytest.fixture(scope="session")
def params4():
    return pw.PotentialParams(xi=4.0)


@pytest.fixture(scope="session")
def basis4(params4):
    return pw.Eigenbasis(params4)


@pytest.fixture(scope="session")
def periodic_packet(basis4):
    return pw.WavePacket((1j, 0.0, 0.0, 10.0), basis4)


@pytest.fixture(scope="session")
def qp_packet(basis4):
    return pw.WavePacket((1j, 1.0, 0.0, 10.0), basis4)


@pytest.fixture(scope="session")
def chaotic_packet(basis4):
    return pw.WavePacket((1j, 1.0, 4.0, 10.0), basis4)
