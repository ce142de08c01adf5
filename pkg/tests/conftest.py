import os
import sys

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

from acceptreject.core import Space  # noqa: E402
from acceptreject.engine import Assessment  # noqa: E402

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow],
    derandomize=True,
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

GOLDEN = os.path.join(os.path.dirname(__file__), "golden")


@pytest.fixture
def plane():
    return Space(["a", "b"])


def running_example(space, name):
    """The rational stand-ins for the three planar running examples."""
    g = space.gamble
    if name == "E1":
        return Assessment(space, [g([2, 1]), g([1, 2])], [g([2, -1]), g([-1, 2])])
    if name == "E2":
        return Assessment(space, [g([1, 1])], [g([1, -1]), g([-1, 1])])
    if name == "E3":
        return Assessment(space, [g([2, 1]), g([-1, 1])], [g([1, 1]), g([-3, 1])])
    raise KeyError(name)


# acceptance criteria report one line each at the end of the run
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
