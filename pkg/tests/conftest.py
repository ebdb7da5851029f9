import numpy as np
import pytest

from binwalk.walk import Cycle, Hypercube


def topology_of_dim(d):
    """A topology with total dimension ``d`` (``d`` a power of two)."""
    if d == 2:
        return Hypercube(1)
    return Cycle(0, d // 2 - 1)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok in results.items():
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {label}")
