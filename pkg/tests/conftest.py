import math

import pytest
from scipy.special import beta as B

from hardysob.radial import RadialGrid


def sphere(N):
    return 2 * math.pi ** (N / 2) / math.gamma(N / 2)


def instanton_integrals(N, s):
    """Closed forms of int |grad U|^2 dx and int U^p |x|^{-s} dx via Beta integrals.

    With U = (1 + r^a)^{-b}, a = 2 - s, b = (N-2)/a, substitute y = r^a.
    """
    a = 2.0 - s
    b = (N - 2.0) / a
    m = (N - s) / a
    grad = sphere(N) * a * b**2 * B(b + 2, b)
    pot = sphere(N) * B(m, m) / a
    return grad, pot


def mu_s_exact(N, s):
    grad, pot = instanton_integrals(N, s)
    p = 2 * (N - s) / (N - 2)
    return grad / pot ** (2 / p)


MU_3_1 = 2 * math.sqrt(2 * math.pi / 3)


@pytest.fixture(scope="session")
def grid3():
    return RadialGrid.logspaced(3)


@pytest.fixture(scope="session")
def grid4():
    return RadialGrid.logspaced(4)


# one PASS/FAIL line per acceptance criterion in the terminal summary
_ACCEPTANCE = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    crit = item.get_closest_marker("criterion")
    if crit is None:
        return
    num, title = crit.args
    failed = rep.failed or (rep.when == "call" and rep.skipped)
    if rep.when == "call" or failed:
        prev = _ACCEPTANCE.get(num, (title, True))
        _ACCEPTANCE[num] = (title, prev[1] and not failed)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(num, title): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_ACCEPTANCE):
        title, ok = _ACCEPTANCE[num]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {num:2d}  {title}")
