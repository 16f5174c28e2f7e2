import pytest

from toricgcp import QQ, Poly

XY = ("x", "y")
F22_TEXT = ("1 + 2*x - 2*x^2*y - 5*x*y + x^2 + 3*x^3*y",
            "2 + 6*x - 6*x^2*y - 11*x*y + 4*x^2 + 5*x^3*y")
D22 = (((0, 0), (3, 1)), ((1, 1), (2, 0)))
SIMPLEX2 = ((0, 0), (1, 0), (0, 1))

G_TEXT = ("y*z + x*z + 2*x*y + 3*x*y*z",
          "y*z + x*z + 4*x*y + 9*x*y*z",
          "y*z + x*z + 8*x*y + 27*x*y*z")
A_PRIME = ((0, 1, 1), (1, 0, 1), (1, 1, 0), (1, 1, 1))


def rect(a, b):
    return tuple((i, j) for i in range(a + 1) for j in range(b + 1))


CUBE = tuple((i, j, k) for i in (0, 1) for j in (0, 1) for k in (0, 1))


@pytest.fixture
def F22():
    return tuple(Poly.parse(t, XY) for t in F22_TEXT)


@pytest.fixture
def G3():
    return tuple(Poly.parse(t, ("x", "y", "z")) for t in G_TEXT)


def reference_quartic(field=QQ):
    u = ("u0", "u1", "u2")
    out = Poly.constant(-4, u, field)
    for t in ("u0 + u1 + u2", "28*u0 + 4*u1 + 49*u2", "u0 - u1 + u2", "4*u0 - 4*u1 + u2"):
        out = out * Poly.parse(t, u, field)
    return out


# ---------------------------------------------------------------------------
# one summary line per acceptance criterion

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, text): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.failed):
        number, text = mark.args
        ok = rep.passed
        prev = _CRITERIA.get(number, (text, True))
        _CRITERIA[number] = (text, prev[1] and ok)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        text, ok = _CRITERIA[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {text}")
