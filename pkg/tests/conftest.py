import math

import pytest

from uwajam.analysis import Scenario
from uwajam.config import default_scenario


@pytest.fixture(scope="session")
def shallow() -> Scenario:
    return default_scenario("shallow")


@pytest.fixture(scope="session")
def mid() -> Scenario:
    return default_scenario("mid")


@pytest.fixture(scope="session")
def deep() -> Scenario:
    return default_scenario("deep")


def combined_se(a, b) -> float:
    return math.sqrt(a * a + b * b)
