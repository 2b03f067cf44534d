import random
from fractions import Fraction

import pytest
from hypothesis import settings

from cakecut.geometry import Point
from cakecut.scene import build_kissing_chain, build_single_cake

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


def rational_rim_point(cake, t):
    """Rim point from the rational half-angle parameter ``t``."""
    t = Fraction(t)
    d = 1 + t * t
    return cake.center + Point((1 - t * t) / d, 2 * t / d).scale(cake.radius)


def random_radii(rng, n, lo=Fraction(1, 2), hi=Fraction(4)):
    """Rational radii in ``[lo, hi]`` on a grid of quarters."""
    steps = int((hi - lo) * 4)
    return [lo + Fraction(rng.randint(0, steps), 4) for _ in range(n)]


def random_t(rng):
    return Fraction(rng.randint(-2000, 2000), rng.randint(1, 997))


@pytest.fixture(scope="session")
def three_unit():
    return build_kissing_chain([1, 1, 1])


@pytest.fixture(scope="session")
def unit_marked():
    return build_single_cake(1)


@pytest.fixture
def rng():
    return random.Random(20240917)
