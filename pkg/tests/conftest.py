import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings

from rdcbench.dataset import CodecDataset, load_table1

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", max_examples=200, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def table1():
    return load_table1()


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


def random_curve(rng, n=4, name="X", rate_scale=1.0, mse_scale=1.0, complexity=None):
    """Random decreasing RD curve with positive coordinates."""
    rates = np.sort(rng.uniform(0.3, 8.0, n)) * rate_scale
    while np.any(np.diff(rates) <= 0):
        rates = np.sort(rng.uniform(0.3, 8.0, n)) * rate_scale
    mse = np.sort(rng.uniform(2.0, 60.0, n))[::-1] * mse_scale
    if complexity is None:
        cs = rng.uniform(100, 2000, n)
    else:
        cs = np.full(n, float(complexity))
    return CodecDataset(name, tuple(zip(rates, mse, cs)), "curve")


ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
