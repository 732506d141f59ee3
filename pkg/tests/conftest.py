from pathlib import Path

import numpy as np
import pytest

from gaed.code import LinearCode, load_matrix
from gaed.gf2 import BitMatrix

DATA = Path(__file__).resolve().parents[1] / "src" / "gaed" / "data"

HAMMING_H = [[1, 0, 1, 0, 1, 0, 1],
             [0, 1, 1, 0, 0, 1, 1],
             [0, 0, 0, 1, 1, 1, 1]]


@pytest.fixture
def data_dir():
    return DATA


@pytest.fixture
def t_ex():
    return BitMatrix.from_array([[1, 0, 0], [0, 1, 1], [1, 0, 1]])


@pytest.fixture
def h_ex():
    return BitMatrix.from_array([[1, 0, 1], [0, 1, 0]])


@pytest.fixture
def hamming():
    return LinearCode.from_pcm(BitMatrix.from_array(HAMMING_H))


@pytest.fixture
def hamming_t():
    return load_matrix(DATA / "hamming74_t.txt", "dense")


def repetition_pcm(n):
    """Chain PCM x_i + x_{i+1} = 0: a tree."""
    h = np.zeros((n - 1, n), dtype=np.uint8)
    for i in range(n - 1):
        h[i, i] = h[i, i + 1] = 1
    return BitMatrix.from_array(h)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# -- one summary line per acceptance criterion ------------------------------

_CRITERIA: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion id")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    number, title = mark.args
    if report.when == "call" or (report.when == "setup" and report.skipped):
        if report.skipped:
            reason = report.longrepr[2] if isinstance(report.longrepr, tuple) else ""
            _CRITERIA[number] = (title, "SKIP", reason.removeprefix("Skipped: "))
        else:
            _CRITERIA[number] = (title, "PASS" if report.passed else "FAIL", "")
    elif report.failed:
        _CRITERIA[number] = (title, "FAIL", f"error during {report.when}")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, status, note = _CRITERIA[number]
        line = f"criterion {number} [{status}] {title}"
        terminalreporter.write_line(line + (f" ({note})" if note else ""))
