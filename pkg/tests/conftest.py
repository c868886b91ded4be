import numpy as np
import pytest

from hyperinv import HyperMatrix, symmetrize


@pytest.fixture
def rng():
    return np.random.Generator(np.random.PCG64(20240601))


def rand_tensor(rng, rank, dim):
    return HyperMatrix(rng.standard_normal((dim,) * rank))


def rand_sym(rng, rank, dim):
    return symmetrize(rand_tensor(rng, rank, dim))


def diag4(a, b):
    x = np.zeros((2,) * 4)
    x[0, 0, 0, 0], x[1, 1, 1, 1] = a, b
    return HyperMatrix(x)


# one summary line per acceptance criterion, collected from tests marked
# with @pytest.mark.criterion(n); tests may attach measured values with the
# ``detail`` fixture
_criteria: dict = {}


@pytest.fixture
def detail(request):
    def add(text):
        request.node.user_properties.append(("detail", text))
    return add


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        ok, notes = _criteria.get(marker.args[0], (True, []))
        notes = notes + [v for k, v in item.user_properties if k == "detail"]
        if not rep.passed:
            notes.append(f"FAILED {item.name}")
        _criteria[marker.args[0]] = (ok and rep.passed, notes)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        ok, notes = _criteria[n]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {n:>2}: " + "; ".join(notes))
