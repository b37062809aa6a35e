import pytest
from hypothesis import HealthCheck, settings

from sgideals.families import _engine
from sgideals.transformations import parse_literal

settings.register_profile("pkg", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("pkg")


def T(n):
    return _engine("T", n)


def I(n):
    return _engine("I", n)


def el(S, text):
    return S.index_of(parse_literal(text, partial="-" in text or S.name.startswith("I_")))


@pytest.fixture(scope="session")
def T3():
    return T(3)


@pytest.fixture(scope="session")
def T4():
    return T(4)
