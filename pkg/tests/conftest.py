from __future__ import annotations

import pytest

from stabfan.atilde import build_atilde
from stabfan.library import named


@pytest.fixture(scope="session")
def a2():
    return named("a2")


@pytest.fixture(scope="session")
def a3():
    return named("a3_linear")


@pytest.fixture(scope="session")
def kron():
    return named("kronecker")


@pytest.fixture(scope="session")
def kron3():
    return named("kronecker3")


@pytest.fixture(scope="session")
def alg_b():
    return named("counter_ray_b3")


@pytest.fixture(scope="session")
def at3():
    return build_atilde(3)
