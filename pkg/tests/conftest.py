import json
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from gentle_jordan.fields import QQ, PrimeField
from gentle_jordan.fixtures import fixture_names, load_fixture

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

FROZEN_PATH = Path(__file__).parent / "data" / "frozen.json"
FIXTURES = fixture_names()


@pytest.fixture(scope="session")
def frozen():
    return json.loads(FROZEN_PATH.read_text())


@pytest.fixture
def F2():
    return PrimeField(2)


@pytest.fixture
def F5():
    return PrimeField(5)


@pytest.fixture
def rational():
    return QQ


@pytest.fixture(params=FIXTURES)
def any_fixture(request):
    return load_fixture(request.param)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
