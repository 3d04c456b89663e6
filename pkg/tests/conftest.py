import importlib

import pytest

from huygens import _pykernels

BACKENDS = [pytest.param(_pykernels, id="python")]
try:
    BACKENDS.append(pytest.param(importlib.import_module("huygens._kernels"), id="cython"))
except ImportError:  # extension not built
    pass


@pytest.fixture(params=BACKENDS)
def kern(request):
    """Each available kernel backend in turn."""
    return request.param


_CRITERIA = pytest.StashKey[list]()


@pytest.fixture
def criterion(request):
    """Record one acceptance criterion: ``with criterion(n, label, budget_s): ...``."""
    import contextlib
    import time

    log = request.config.stash.setdefault(_CRITERIA, [])

    @contextlib.contextmanager
    def run(number, label, budget):
        start = time.perf_counter()
        ok = False
        try:
            yield
            ok = True
        finally:
            elapsed = time.perf_counter() - start
            within = elapsed < budget
            status = "PASS" if ok and within else "FAIL"
            note = "" if within else f" (over budget {budget:g}s)"
            line = f"criterion {number:2d} {status}: {label} [{elapsed:.2f}s]{note}"
            log.append(line)
            print(line)
        assert within, f"criterion {number} took {elapsed:.2f}s, budget {budget}s"

    return run


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_CRITERIA, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
