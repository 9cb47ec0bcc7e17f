import pytest
from hypothesis import settings

import certquad as cq

settings.register_profile("default", deadline=None, max_examples=50)
settings.load_profile("default")

UNIT = cq.Rectangle.unit()
SYM = cq.Rectangle.symmetric()
SKEW = cq.Rectangle(-2.0, 3.0, 1.0, 4.0)

RECT_SET = (
    SYM,
    UNIT,
    cq.Rectangle(0.0, 2.0, 0.0, 3.0),
    SKEW,
    cq.Rectangle(0.5, 1.75, -0.25, 0.5),
)


@pytest.fixture
def unit():
    return UNIT


@pytest.fixture
def sym():
    return SYM


@pytest.fixture
def skew():
    return SKEW


def integrand(name, rect=None):
    return cq.get_entry(name).integrand(rect)
