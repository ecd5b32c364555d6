import random
from fractions import Fraction

import pytest
from hypothesis import settings

from veronalt.terms import FreePoly, Monomial, shape_count

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def random_monomial(rng: random.Random, rank: int, degree: int) -> Monomial:
    shape = rng.randrange(shape_count(degree))
    word = [rng.randrange(rank) for _ in range(degree)]
    return Monomial.from_shape(degree, shape, word)


def random_poly(rng: random.Random, rank: int, max_degree: int, terms: int = 4) -> FreePoly:
    out = {}
    for _ in range(terms):
        mono = random_monomial(rng, rank, rng.randint(1, max_degree))
        out[mono] = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
    return FreePoly(out)


@pytest.fixture
def rng():
    return random.Random(20240611)
