import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=400, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def halton_disk(n: int, rmax: float = 0.9) -> np.ndarray:
    """n deterministic quasi-random points filling |z| <= rmax by area."""
    from scipy.stats import qmc

    uv = qmc.Halton(d=2, scramble=False).random(n + 1)[1:]
    return rmax * np.sqrt(uv[:, 0]) * np.exp(2j * np.pi * uv[:, 1])


@pytest.fixture
def disk_points():
    return halton_disk


def pytest_terminal_summary(terminalreporter):
    from . import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for k in sorted(test_acceptance.RESULTS):
            terminalreporter.write_line(test_acceptance.RESULTS[k])
