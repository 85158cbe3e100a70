import random

import pytest


def pytest_addoption(parser):
    parser.addoption(
        "--seed",
        action="store",
        default="1387",
        help="base seed for randomized property tests",
    )


@pytest.fixture
def base_seed(request) -> int:
    return int(request.config.getoption("--seed"))


@pytest.fixture
def rng(base_seed, request) -> random.Random:
    # Mix in the test id so each test gets its own reproducible stream.
    return random.Random(f"{base_seed}:{request.node.nodeid}")
