import random
from fractions import Fraction

import pytest
from hypothesis import settings, strategies as st

from leibniz import corpus
from leibniz.linalg import Matrix

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)
small_ints = st.integers(min_value=-4, max_value=4)


def matrices(n_min=1, n_max=4, elements=small_ints):
    return st.integers(n_min, n_max).flatmap(
        lambda n: st.lists(st.lists(elements, min_size=n, max_size=n), min_size=n, max_size=n)
    ).map(Matrix)


@pytest.fixture(scope="session")
def bundled():
    return corpus.load_corpus()


@pytest.fixture(scope="session")
def charnil6():
    return corpus.charnil(6)


@pytest.fixture
def rng():
    return random.Random(1234)


def random_vector(rng, dim):
    return [Fraction(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(dim)]
