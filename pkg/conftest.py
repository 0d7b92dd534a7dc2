import random

import pytest

from torsionlab.algebra.poly import IntPolynomial


@pytest.fixture
def rng():
    return random.Random(20240611)


def random_polynomial(rng, n, max_degree=4, max_terms=5, coeff_range=5):
    """A random integer polynomial in n variables."""
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        degree = rng.randint(0, max_degree)
        exponents = [0] * n
        for _ in range(degree):
            exponents[rng.randrange(n)] += 1
        terms[tuple(exponents)] = rng.randint(-coeff_range, coeff_range)
    return IntPolynomial(terms, n)


@pytest.fixture
def make_polynomial(rng):
    def factory(n, **kwargs):
        return random_polynomial(rng, n, **kwargs)

    return factory
