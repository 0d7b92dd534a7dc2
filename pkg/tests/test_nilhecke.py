from collections import Counter

import pytest

from torsionlab.algebra.nilhecke import (
    NilHeckeElement,
    act_on_poly,
    block_product,
    coefficient_of,
    d_of,
    multiply,
    multiply_pruned,
    scalar,
    unit,
)
from torsionlab.algebra.poly import constant, demazure, elementary_symmetric, monomial, variable
from torsionlab.algebra.sym import (
    all_permutations,
    from_letters,
    identity,
    length,
    longest_element,
    parabolic,
    simple,
    some_reduced_word,
)
from conftest import random_polynomial


def random_element(rng, n, terms=3, homogeneous_degree=None):
    perms = all_permutations(n)
    coeffs = {}
    for _ in range(terms):
        w = rng.choice(perms)
        if homogeneous_degree is None:
            f = random_polynomial(rng, n, max_degree=2, max_terms=3)
        else:
            exponents = [0] * n
            for _ in range(homogeneous_degree):
                exponents[rng.randrange(n)] += 1
            f = monomial(exponents, n, rng.choice([-2, -1, 1, 3]))
        coeffs[w] = f
    return NilHeckeElement(coeffs, n)


def letters_of(element):
    counts = Counter()
    for x, _ in element.items():
        counts.update(some_reduced_word(x).letters)
    return counts


def test_d_of_examples():
    assert d_of(identity(3)) == unit(3)
    s1 = d_of(simple(1, 3))
    s2 = d_of(simple(2, 3))
    assert not (s1 * s1)
    assert s1 * s2 * s1 == s2 * s1 * s2
    assert s1 * s2 * s1 == d_of(longest_element(parabolic({1, 2}, 3), 3))


def test_multiply_examples():
    n = 3
    D2 = d_of(simple(2, n))
    alpha = variable(1, n) - variable(2, n)
    assert multiply(D2, D2.left_mul_poly(alpha)) == D2.scale(-1)

    f, g = variable(1, n) + 2, variable(3, n) ** 2
    assert multiply(scalar(f), scalar(g)) == scalar(f * g)

    D1 = d_of(simple(1, 2))
    expected = D1.left_mul_poly(variable(2, 2)) + unit(2)
    assert multiply(D1, scalar(variable(1, 2))) == expected


def test_coefficient_of():
    w = from_letters([1, 2], 3)
    assert coefficient_of(d_of(w), w) == constant(1, 3)
    assert coefficient_of(d_of(w), identity(3)).is_zero()


def test_act_on_poly_examples(make_polynomial):
    assert act_on_poly(d_of(simple(1, 2)), variable(1, 2)) == 1
    p = make_polynomial(3)
    assert act_on_poly(unit(3), p) == p


def test_act_on_poly_is_demazure(make_polynomial):
    for w in all_permutations(4):
        p = make_polynomial(4)
        assert act_on_poly(d_of(w), p) == demazure(w, p)


@pytest.mark.parametrize("n", [3, 4])
def test_associativity(rng, n):
    for _ in range(15):
        a, b, c = (random_element(rng, n, terms=2) for _ in range(3))
        assert multiply(multiply(a, b), c) == multiply(a, multiply(b, c))


@pytest.mark.parametrize("n", [3, 4])
def test_module_action_compatibility(rng, n):
    for _ in range(15):
        a, b = random_element(rng, n), random_element(rng, n)
        p = random_polynomial(rng, n, max_degree=5)
        assert act_on_poly(multiply(a, b), p) == act_on_poly(a, act_on_poly(b, p))


def test_left_linearity(rng):
    for _ in range(20):
        a, b = random_element(rng, 3), random_element(rng, 3)
        f = random_polynomial(rng, 3, max_degree=2)
        assert multiply(a.left_mul_poly(f), b) == multiply(a, b).left_mul_poly(f)


def test_degree_additivity(rng):
    for _ in range(20):
        a = random_element(rng, 4, terms=1, homogeneous_degree=rng.randint(0, 3))
        b = random_element(rng, 4, terms=1, homogeneous_degree=rng.randint(0, 3))
        (da,) = a.term_degrees().values()
        (db,) = b.term_degrees().values()
        for degree in multiply(a, b).term_degrees().values():
            assert degree == da + db


def test_multiply_pruned_without_budget_is_multiply(rng):
    a, b = random_element(rng, 3), random_element(rng, 3)
    target = longest_element(parabolic({1, 2}, 3), 3)
    assert multiply_pruned(a, b, target) == multiply(a, b)


@pytest.mark.parametrize("n", [3, 4])
def test_multiply_pruned_keeps_target_coefficient(rng, n):
    target = longest_element(parabolic(range(1, n), n), n)
    for _ in range(20):
        a, b, c = (random_element(rng, n, terms=2) for _ in range(3))
        full = multiply(c, multiply(a, b))
        pruned = multiply(c, multiply_pruned(a, b, target, letters_of(c)))
        assert coefficient_of(pruned, target) == coefficient_of(full, target)


def test_multiply_pruned_respects_parabolic_target(rng):
    # target in W_{1} x W_{3} inside S_4
    target = longest_element(parabolic({1, 3}, 4), 4)
    for _ in range(20):
        a, b = random_element(rng, 4), random_element(rng, 4)
        pruned = multiply_pruned(a, b, target, Counter())
        assert set(pruned.support()) <= {target}
        assert coefficient_of(pruned, target) == coefficient_of(multiply(a, b), target)


def test_block_product_is_multiple_of_longest_element():
    n = 3
    w0 = longest_element(parabolic({1, 2}, n), n)
    x1, x3 = variable(1, n), variable(n, n)
    items = [(simple(1, n), -x1), (from_letters([1, 2], n), x3 * x3)]
    block = block_product(items, tail=d_of(w0))
    assert block.support() == [w0]
    plain = block_product(items)
    assert coefficient_of(block, w0) == act_on_poly(plain, constant(1, n))
    assert coefficient_of(block, w0) == -1


@pytest.mark.parametrize("n", [3, 4])
def test_symmetric_insertion_vanishes(rng, n):
    """A symmetric factor in any zeta kills the block product against D_{w_0}."""
    w0 = longest_element(parabolic(range(1, n), n), n)
    perms = [w for w in all_permutations(n) if 0 < length(w) <= 3]
    for _ in range(20):
        ws = [rng.choice(perms) for _ in range(rng.randint(1, 3))]
        k = rng.randint(1, min(n, sum(length(w) for w in ws)))
        budget = sum(length(w) for w in ws) - k
        zetas = []
        for _ in ws:
            exponents = [0] * n
            for _ in range(rng.randint(0, budget)):
                exponents[rng.choice([0, n - 1])] += 1
            budget -= sum(exponents)
            zetas.append(monomial(exponents, n))
        if budget:
            zetas[-1] = zetas[-1] * variable(1, n) ** budget
        slot = rng.randrange(len(zetas))
        zetas[slot] = zetas[slot] * elementary_symmetric(k, range(1, n + 1), n)
        block = block_product(list(zip(ws, zetas)), tail=d_of(w0))
        assert not block
