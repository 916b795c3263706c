import os

import pytest
from hypothesis import HealthCheck, settings

from mualg.formats import parse_model

settings.register_profile(
    "default", deadline=None, max_examples=int(os.environ.get("HYPOTHESIS_EXAMPLES", 60)),
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

M1_TEXT = """\
states: s0 s1
actions: a
rel a: s0->s1 s1->s1
val p: s1
"""


@pytest.fixture
def m1():
    return parse_model(M1_TEXT)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
