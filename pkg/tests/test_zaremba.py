import itertools
from fractions import Fraction

import numpy as np
import pytest
from sympy import fibonacci, isprime

from torsionlab.core.errors import InvalidInputError, ResourceCapError
from torsionlab.zaremba.enumerate import (
    density,
    growth_parameters,
    growth_witness,
    parse_theta,
    prime_records,
    representable_set,
    representable_set_bfs,
    torsion_bridge,
)
from torsionlab.zaremba.semigroup import (
    IDENTITY,
    L,
    R,
    Mat2,
    SemigroupWord,
    gamma_a_generator,
    gamma_product,
    norm_bound_check,
    parse_gamma_word,
)


def test_mat2_arithmetic():
    assert R * L == Mat2(2, 1, 1, 1)
    assert L ** 3 == Mat2(1, 0, 3, 1)
    assert R ** 0 == IDENTITY
    assert (R * L).det() == 1
    assert -L == Mat2(-1, 0, -1, -1)
    assert Mat2.from_rows(((2, 1), (1, 1))) == R * L
    with pytest.raises(InvalidInputError):
        R ** -1


@pytest.mark.parametrize(
    "a, b, A, expected",
    [(1, 1, 1, Mat2(2, 1, 1, 1)), (5, 5, 5, Mat2(26, 5, 5, 1)), (2, 3, 3, Mat2(7, 2, 3, 1))],
)
def test_gamma_a_generator(a, b, A, expected):
    assert gamma_a_generator(a, b, A) == expected
    assert gamma_a_generator(a, b, A) == R ** a * L ** b


def test_gamma_a_generator_range():
    with pytest.raises(InvalidInputError):
        gamma_a_generator(6, 1, 5)
    with pytest.raises(InvalidInputError):
        gamma_a_generator(0, 1, 5)


def test_gamma_words():
    assert parse_gamma_word("rl") == ("R", "L")
    assert gamma_product([]) == IDENTITY
    assert gamma_product("RL") == Mat2(2, 1, 1, 1)
    for n in range(1, 10):
        assert gamma_product("RL" * n).a11 == fibonacci(2 * n + 1)
    with pytest.raises(InvalidInputError):
        parse_gamma_word("RX")


def test_semigroup_word_conversion():
    word = SemigroupWord("gamma_A", ((2, 3), (1, 1)), 3)
    gamma = word.to_gamma()
    assert gamma.letters == ("R", "R", "L", "L", "L", "R", "L")
    assert gamma.product == word.product
    assert word.to_json() == {"alphabet": "gamma_A", "A": 3, "letters": [[2, 3], [1, 1]]}
    with pytest.raises(InvalidInputError):
        SemigroupWord("gamma_A", ((4, 1),), 3)
    with pytest.raises(InvalidInputError):
        SemigroupWord("sl2", ())


def test_representable_set_for_a_equal_one():
    assert representable_set(1, 100, workers=1) == {2, 5, 13, 34, 89}
    assert density(1, 100, workers=1) == Fraction(1, 20)


def test_representable_set_worker_split():
    assert representable_set(3, 600, workers=1) == representable_set(3, 600, workers=3)


def test_density_is_monotone_in_a():
    values = [density(A, 300, workers=1) for A in range(1, 5)]
    assert values == sorted(values)


@pytest.mark.parametrize("A, N", [(1, 1000), (2, 2000), (3, 500)])
def test_depth_first_matches_breadth_first(A, N):
    assert representable_set(A, N, workers=1) == representable_set_bfs(A, N)


@pytest.mark.slow
@pytest.mark.parametrize("A", [1, 2, 3, 4, 5])
def test_depth_first_matches_breadth_first_large(A):
    assert representable_set(A, 10 ** 4) == representable_set_bfs(A, 10 ** 4)


def test_bounds_are_checked():
    with pytest.raises(InvalidInputError):
        representable_set(0, 10)
    with pytest.raises(InvalidInputError):
        representable_set_bfs(2, 0)


def test_prime_records():
    report = prime_records(1, 0.01, 100, workers=1)
    assert report.primes == (2, 5, 13, 89)
    assert report.count == 4
    assert report.to_json()["primes"] == ["2", "5", "13", "89"]
    assert prime_records(1, "1/2", 100, workers=1).primes == (89,)
    assert prime_records(3, "1/2", 1).primes == ()


def test_parse_theta():
    assert parse_theta("1/2") == Fraction(1, 2)
    assert parse_theta(0.25) == Fraction(1, 4)
    for bad in (0, 1, "3/2"):
        with pytest.raises(InvalidInputError):
            parse_theta(bad)


def test_norm_bound_equality_for_smallest_generator():
    for length in range(1, 8):
        word = SemigroupWord("gamma_A", ((1, 1),) * length, 1)
        assert word.product.a11 == fibonacci(2 * length + 1)
        assert norm_bound_check(word, 1)


def test_norm_bound_exhaustive_small_alphabet():
    letters = [(a, b) for a in (1, 2) for b in (1, 2)]
    for length in range(1, 7):
        for word in itertools.product(letters, repeat=length):
            assert norm_bound_check(word, 2)


@pytest.mark.slow
def test_norm_bound_exhaustive_three_letter_alphabet():
    letters = [(a, b) for a in range(1, 4) for b in range(1, 4)]
    for length in range(1, 7):
        for word in itertools.product(letters, repeat=length):
            assert norm_bound_check(word, 3)


def gamma_a_entries(A):
    letters = [(a, b) for a in range(1, A + 1) for b in range(1, A + 1)]
    return letters, np.array([gamma_a_generator(a, b, A).entries() for a, b in letters], dtype=np.int64)


def extend_products(products, generators):
    """gamma * g for every row gamma and generator g, one block of rows per generator."""
    a11, a12, a21, a22 = products.T
    blocks = [
        np.stack([a11 * g11 + a12 * g21, a11 * g12 + a12 * g22, a21 * g11 + a22 * g21, a21 * g12 + a22 * g22], axis=1)
        for g11, g12, g21, g22 in generators
    ]
    return np.concatenate(blocks)


def assert_norm_bound(products, length):
    assert (products > 0).all()
    assert (products[:, 0] == products.max(axis=1)).all()
    assert products[:, 0].min() == int(fibonacci(2 * length + 1))


def test_extend_products_matches_word_products():
    letters, generators = gamma_a_entries(3)
    products = extend_products(generators, generators)
    for first, second in itertools.product(range(len(letters)), repeat=2):
        word = SemigroupWord("gamma_A", (letters[first], letters[second]), 3)
        assert tuple(products[second * len(letters) + first]) == word.product.entries()


@pytest.mark.slow
def test_norm_bound_exhaustive_five_letter_alphabet():
    """Every Gamma_5 word of length at most 6, grown in chunks sharing a two-letter prefix."""
    max_length = 6
    _, generators = gamma_a_entries(5)
    assert_norm_bound(generators, 1)
    prefixes = extend_products(generators, generators)
    assert_norm_bound(prefixes, 2)
    smallest = {length: [] for length in range(3, max_length + 1)}
    for prefix in prefixes:
        products = prefix[np.newaxis, :]
        for length in range(3, max_length + 1):
            products = extend_products(products, generators)
            assert (products > 0).all()
            assert (products[:, 0] == products.max(axis=1)).all()
            smallest[length].append(int(products[:, 0].min()))
    for length, values in smallest.items():
        assert min(values) == int(fibonacci(2 * length + 1))


def test_norm_bound_rejects_empty_word():
    with pytest.raises(InvalidInputError):
        norm_bound_check((), 2)


def test_growth_parameters():
    params = growth_parameters(40, A=5, theta="1/2")
    assert params.N_floor == 33
    assert params.threshold_floor == 16
    assert params.max_word_length == 4
    assert params.c ** 5 == pytest.approx(params.phi)


def test_growth_witness():
    witness = growth_witness(40, A=5, theta="1/2")
    assert witness.p == 31
    assert isprime(witness.p)
    assert witness.matrix.a11 == 31
    assert witness.length <= 40
    assert gamma_product(witness.gamma_word.letters) == witness.matrix
    assert witness.torsion_rank == 3 * witness.length + 5


def test_growth_witness_caps():
    with pytest.raises(ResourceCapError):
        growth_witness(1000, A=5)
    with pytest.raises(ResourceCapError):
        growth_witness(1, A=5)


def test_torsion_bridge_single_letter():
    report = torsion_bridge("L")
    assert report.N == 8
    assert report.twist == 1
    assert sorted(report.certificates) == [(0, 0), (1, 0), (1, 1)]
    assert all(abs(cert.value) == 1 for cert in report.certificates.values())


def test_torsion_bridge_carries_primes():
    report = torsion_bridge("RL")
    assert report.matrix == Mat2(2, 1, 1, 1)
    assert report.twist == -1
    assert report.N == 11
    assert report.certificates[(0, 0)].value % 2 == 0
    assert report.to_json()["entries"][0]["entry"] == "2"


def test_torsion_bridge_rejects_empty_word():
    with pytest.raises(InvalidInputError):
        torsion_bridge("")


@pytest.mark.slow
def test_torsion_bridge_all_short_words():
    for length in range(1, 7):
        for letters in itertools.product("LR", repeat=length):
            report = torsion_bridge("".join(letters))
            for (r, c), cert in report.certificates.items():
                assert abs(cert.value) == abs(report.matrix.entry(r, c))
