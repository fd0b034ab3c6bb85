import numpy as np
import pytest

from qdhmc import _backend, dynamics


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


BACKENDS = ["python"] + (["cython"] if _backend.BACKEND == "cython" else [])


@pytest.fixture(params=BACKENDS)
def backend(request, monkeypatch):
    """Run a test once per available kernel backend."""
    mod = _backend._fallback if request.param == "python" else _backend.kernels
    monkeypatch.setattr(dynamics, "kernels", mod)
    return request.param


def pytest_terminal_summary(terminalreporter):
    """One PASS/FAIL line per acceptance criterion that ran."""
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.line(n))
