import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from reggraph import kernels  # noqa: E402
from reggraph.io import load_fixture  # noqa: E402


@pytest.fixture(params=kernels.available_backends())
def backend(request):
    kernels.use_backend(request.param)
    yield request.param
    kernels.use_backend(None)


@pytest.fixture
def fixture_graph():
    return lambda name: load_fixture(name).graph


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "REPORT", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for n in sorted(lines):
            terminalreporter.write_line(lines[n])
