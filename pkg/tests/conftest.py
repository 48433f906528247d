import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from pdhglp import LpProblem, SparseMatrix  # noqa: E402

_criteria: dict[str, tuple[str, str]] = {}


def make_lp(a=None, g=None, c=None, b=None, h=None, l=None, u=None, **kw) -> LpProblem:
    """Small dense-input LP builder; omitted blocks are empty, bounds default to [0, inf)."""
    c = np.atleast_1d(np.asarray(c, dtype=float))
    n = c.shape[0]
    a = np.zeros((0, n)) if a is None else np.atleast_2d(np.asarray(a, dtype=float))
    g = np.zeros((0, n)) if g is None else np.atleast_2d(np.asarray(g, dtype=float))
    return LpProblem(
        a=SparseMatrix(a, shape=a.shape),
        g=SparseMatrix(g, shape=g.shape),
        c=c,
        b=np.zeros(0) if b is None else np.atleast_1d(b),
        h=np.zeros(0) if h is None else np.atleast_1d(h),
        l=np.zeros(n) if l is None else np.atleast_1d(np.asarray(l, dtype=float)),
        u=np.full(n, np.inf) if u is None else np.atleast_1d(np.asarray(u, dtype=float)),
        **kw,
    )


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None or call.when != "call":
        return
    number, title = marker.args
    outcome = "PASS" if call.excinfo is None else "FAIL"
    _criteria[item.nodeid] = (f"{number}", f"{outcome}  criterion {number}: {title}")


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(_criteria.values(), key=lambda kv: int(kv[0])):
        terminalreporter.write_line(line)
