import pytest
from hypothesis import HealthCheck, settings

from awarekit import fixtures
from awarekit.semantics import EvalContext
from awarekit.syntax import Signature

settings.register_profile(
    "awarekit", deadline=None, max_examples=100, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("awarekit")


@pytest.fixture(scope="session")
def sig():
    return Signature(("d1", "d2"), ("P", "Q", "R"), ("QC",), 2)


@pytest.fixture(scope="session")
def ex1():
    return fixtures.model("ex1")


@pytest.fixture(scope="session")
def ex2():
    return fixtures.model("ex2")


@pytest.fixture(scope="session")
def ex2b():
    return fixtures.model("ex2b")


@pytest.fixture(scope="session")
def ex4():
    return fixtures.model("ex4")


@pytest.fixture
def ctx1(ex1):
    return EvalContext(ex1)


@pytest.fixture
def ctx2(ex2):
    return EvalContext(ex2)


def pytest_terminal_summary(terminalreporter):
    from tests import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(test_acceptance.RESULTS):
            terminalreporter.write_line(test_acceptance.RESULTS[n])
