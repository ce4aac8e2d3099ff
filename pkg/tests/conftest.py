import pytest

from qwalg.builtins import boolean2, example_513, lukasiewicz


@pytest.fixture(scope="session")
def ex513():
    return example_513()


@pytest.fixture(scope="session")
def bool2():
    return boolean2()


@pytest.fixture(scope="session")
def luk3():
    return lukasiewicz(3)

