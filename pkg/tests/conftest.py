import pytest

from breakrisk.fixtures import builtin_fixture


@pytest.fixture(scope="session")
def mce0():
    return builtin_fixture("mce0")


@pytest.fixture(scope="session")
def mce1():
    return builtin_fixture("mce1")


@pytest.fixture(scope="session")
def mce2():
    return builtin_fixture("mce2")


@pytest.fixture(scope="session")
def p3_prose():
    return builtin_fixture("p3-prose")
