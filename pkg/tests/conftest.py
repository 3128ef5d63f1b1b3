import numpy as np
import pytest

import cvschmidt as cs

_ACCEPTANCE = []


@pytest.fixture(scope="session")
def pdc_params():
    return cs.pdc_from_physical(**cs.DEFAULT_PHYSICAL)


@pytest.fixture(scope="session")
def pdc(pdc_params):
    """Normalized biphoton amplitude with the quoted physical parameters."""
    return cs.normalize(cs.pdc_amplitude(pdc_params))


@pytest.fixture(scope="session")
def pdc_dec(pdc):
    return cs.schmidt_decompose(pdc, cs.BasisFamily.hermite(1.0), m0=25)


@pytest.fixture(scope="session")
def acceptance():
    """Record ``(criterion, passed, detail)``; printed after the run."""
    def record(name, passed, detail=""):
        _ACCEPTANCE.append((name, bool(passed), detail))
    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in _ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {name}  {detail}")


def hermite_function(n, x, beta=1.0):
    """Independent O_n via scipy's physicists' Hermite and log-factorials."""
    from scipy.special import eval_hermite, gammaln
    x = np.asarray(x, dtype=float)
    lognorm = -0.5 * (0.5 * np.log(np.pi) + n * np.log(2.0) + gammaln(n + 1))
    return np.sqrt(beta) * np.exp(lognorm) * eval_hermite(n, beta * x) * np.exp(-0.5 * (beta * x) ** 2)
