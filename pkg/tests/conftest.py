import sys

import numpy as np
import pytest

from nomaidnc.channel import Group, Receiver, Topology


def make_topology(gains, near=None, noise=1.0, p_max=10.0, r_min=0.0):
    """Abstract cell with explicit gains; ``near`` lists the SIC-capable ids."""
    near = set(range(len(gains))) if near is None else set(near)
    receivers = tuple(
        Receiver(m, 100.0 if m in near else 400.0, float(g), float(noise),
                 Group.NEAR if m in near else Group.FAR)
        for m, g in enumerate(gains)
    )
    return Topology(receivers, p_max=p_max, r_min=r_min, cell_radius_m=500.0)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "REPORT", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
