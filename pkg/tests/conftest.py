import numpy as np
import pytest

from fpqc.majorana import _PAULI_MATRICES

ACCEPTANCE_RESULTS = []


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def jw_dense(modes):
    """Independent Jordan-Wigner construction straight from Kronecker products."""
    x, y, z, i2 = (_PAULI_MATRICES[k] for k in "XYZI")
    ops = []
    for j in range(modes):
        for letter in (x, y):
            mat = np.ones((1, 1), dtype=complex)
            for q in range(modes):
                mat = np.kron(mat, z if q < j else letter if q == j else i2)
            ops.append(mat)
    return ops


def random_density(rng, d):
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    rho = a @ a.conj().T
    return rho / np.trace(rho)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
