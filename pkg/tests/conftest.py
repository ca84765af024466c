import numpy as np
import pytest

_criteria: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, label): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    number, label = mark.args
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        verdict = "PASS" if rep.passed else ("SKIP" if rep.skipped else "FAIL")
        prev = _criteria.get(number)
        if prev is None or prev[1] == "PASS":
            _criteria[number] = (label, verdict)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        label, verdict = _criteria[number]
        terminalreporter.write_line(f"criterion {number:2d} {verdict}  {label}")


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


def random_hermitian(rng, n, psd=False, rank=None):
    a = rng.normal(size=(n, rank or n)) + 1j * rng.normal(size=(n, rank or n))
    if psd or rank is not None:
        return a @ a.conj().T
    return (a + a.conj().T) / 2
