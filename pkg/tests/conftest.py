from __future__ import annotations

import numpy as np
import pytest

from nabla_fde import _kernels

BACKENDS = ["numpy"] + (["numba"] if _kernels.numba_available() else [])


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    # compile (or load cached) numba kernels before anything is timed
    for name in BACKENDS:
        k = _kernels.get_kernels(name)
        c = k.coefficients(0.5, 8)
        k.causal_convolve(c, np.ones(9))
        k.volterra_march(c, np.ones(9), -0.2, 1 / 1.2, np.inf)
        k.ml_log_grid(0.5, 1.0, np.log(0.2), True, 4, 16)
    yield


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2])):
            terminalreporter.write_line(line)
