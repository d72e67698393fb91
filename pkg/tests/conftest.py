import numpy as np
import pytest

from fredkin_lab.algebra import FLOAT, UMatrix

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def haar_unitary(rng: np.random.Generator, n: int = 2) -> np.ndarray:
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def random_u2(rng):
    def make():
        return UMatrix(haar_unitary(rng), FLOAT)

    return make
