import numpy as np
import pytest

from rconvex.funcmodel import Interval, PositiveFunction, Rectangle


@pytest.fixture
def unit_interval():
    return Interval(0.0, 1.0)


@pytest.fixture
def unit_square():
    return Rectangle(Interval(0.0, 1.0), Interval(0.0, 1.0))


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def func(text, domain):
    return PositiveFunction.from_text(text, domain)
