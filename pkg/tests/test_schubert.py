import itertools

import pytest

from torsionlab.algebra.poly import IntPolynomial, demazure, monomial, operator_word_value, variable
from torsionlab.algebra.schubert import (
    FIRST,
    LAST,
    CoinvariantPoly,
    SchubertVector,
    chevalley_mul,
    demazure_schubert,
    evaluate_data,
    expand,
    extract_coefficient,
    mul_power,
    normal_form,
    operator_matrix,
    schubert_rep,
    staircase,
)
from torsionlab.algebra.sym import (
    all_permutations,
    from_letters,
    identity,
    length,
    longest_element,
    parabolic,
    permutations_of_length,
    simple,
)
from torsionlab.core.errors import InvalidInputError
from torsionlab.search.operators import fibonacci_operators, paper8_operators, step, ulu_operators


S1 = from_letters([1], 4)
S3 = from_letters([3], 4)
PAIR = (S1, S3)


def X(w):
    return SchubertVector.basis(w)


def test_schubert_rep_examples():
    for n in (2, 3, 4):
        w0 = longest_element(parabolic(range(1, n), n), n)
        assert schubert_rep(w0) == staircase(n)
        assert schubert_rep(identity(n)) == 1
    assert schubert_rep(S1) == variable(1, 4)
    assert schubert_rep(from_letters([2], 3)) == variable(1, 3) + variable(2, 3)


def test_demazure_on_representatives():
    for w in all_permutations(4):
        for i in range(1, 4):
            image = demazure(simple(i, 4), schubert_rep(w))
            if w.has_left_descent(i):
                assert image == schubert_rep(w.left_mul_simple(i))
            else:
                assert image.is_zero()


def test_demazure_schubert_examples():
    assert not demazure_schubert(1, X(identity(3)))
    assert demazure_schubert(1, X(simple(1, 3))) == X(identity(3))


def test_chevalley_examples():
    n = 4
    assert chevalley_mul(variable(4, n), X(identity(n))) == X(S3).scale(-1)
    assert chevalley_mul(variable(1, n), X(identity(n))) == X(S1)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_chevalley_matches_polynomial_oracle(n):
    """x_k X_w, expanded from polynomials, equals the Chevalley rule for every w and k."""
    for w in all_permutations(n):
        if length(w) == n * (n - 1) // 2:
            continue
        for k in range(1, n + 1):
            x = variable(k, n)
            assert chevalley_mul(x, X(w)) == expand(x * schubert_rep(w))


def test_chevalley_on_top_class_vanishes():
    w0 = longest_element(parabolic({1, 2}, 3), 3)
    assert not chevalley_mul(variable(1, 3), X(w0))


def test_mul_power():
    n = 4
    v = X(identity(n))
    assert mul_power(v, LAST, 0) == v
    assert mul_power(v, LAST, 1) == X(S3).scale(-1)
    assert mul_power(v, LAST, 2) == expand(variable(4, n) ** 2)
    assert mul_power(v, FIRST, 3) == expand(variable(1, n) ** 3)
    with pytest.raises(InvalidInputError):
        mul_power(v, "middle", 1)


def test_normal_form():
    n = 3
    e1 = variable(1, n) + variable(2, n) + variable(3, n)
    assert normal_form(e1).is_zero()
    assert normal_form(variable(3, n)) == -(variable(1, n) + variable(2, n))
    reduced = normal_form(variable(1, n) ** 3)
    assert isinstance(reduced, CoinvariantPoly)
    assert reduced.is_zero()
    with pytest.raises(InvalidInputError):
        CoinvariantPoly({(3, 0, 0): 1}, 3)


def test_expand_examples():
    for w in all_permutations(4):
        assert expand(schubert_rep(w)) == X(w)
    assert expand(variable(1, 4)) == X(S1)
    assert expand(variable(4, 4)) == X(S3).scale(-1)
    assert not expand(variable(1, 3) ** 3)
    with pytest.raises(InvalidInputError):
        expand(variable(1, 3) + 1)


def test_extract_coefficient(make_polynomial):
    w = from_letters([2, 1], 3)
    assert extract_coefficient(X(w), w) == 1
    assert extract_coefficient(X(w), from_letters([1, 2], 3)) == 0
    v = expand(monomial((2, 1, 0, 0), 4) - 3 * monomial((0, 1, 2, 0), 4))
    for u in permutations_of_length(4, 3):
        assert extract_coefficient(v, u, check=True) == v[u]


def test_fibonacci_power_coefficients():
    op = fibonacci_operators().by_name("F")
    v = X(S1)
    for _ in range(3):
        v = op.apply(v)
    assert extract_coefficient(v, S1, check=True) == 3
    assert extract_coefficient(v, S3, check=True) == 2


@pytest.mark.parametrize(
    "ops, name, expected",
    [
        (fibonacci_operators, "F", ((1, 1), (1, 0))),
        (ulu_operators, "L", ((1, 0), (1, 1))),
        (ulu_operators, "U", ((-1, -1), (0, -1))),
    ],
)
def test_operator_matrices_on_pair(ops, name, expected):
    op = ops().by_name(name)
    assert op.matrix(1, PAIR).rows == expected


def test_operator_matrix_rejects_nonzero_degree():
    with pytest.raises(InvalidInputError):
        operator_matrix([(simple(1, 3), 0, 0)], 1, 3)


def test_operator_matrix_rejects_non_invariant_basis():
    op = step([1], 1, 0, 4)
    with pytest.raises(InvalidInputError):
        operator_matrix([op], 1, 4, basis=[S1])


def test_operator_matrix_full_basis_matches_apply():
    ops = paper8_operators(5)
    op = ops.operators[0]
    m = op.matrix(2)
    assert m.as_array().shape == (len(m.basis), len(m.basis))
    for w in m.basis:
        image = op.apply(X(w))
        assert m.column(w) == [image[u] for u in m.basis]


@pytest.mark.parametrize("n, max_items", [(2, 3), (3, 2)])
def test_small_ranks_only_give_units(n, max_items):
    """For n = 2, 3 every nonzero operator word value is +-1."""
    items = [(w, a, b) for w in all_permutations(n) for a in range(4) for b in range(4 - a)]
    for m in range(1, max_items + 1):
        for data in itertools.product(items, repeat=m):
            if sum(length(w) for w, _, _ in data) != sum(a + b for _, a, b in data):
                continue
            value = operator_word_value(n, data)
            assert value in (-1, 0, 1)
            assert evaluate_data(n, data) == value


def test_evaluate_data_matches_polynomial_side():
    n = 4
    words = [w for w in all_permutations(n) if 1 <= length(w) <= 2]
    for w1, w2 in itertools.product(words, repeat=2):
        data = [(w1, length(w1), 0), (w2, 0, length(w2))]
        assert evaluate_data(n, data) == operator_word_value(n, data)
        data = [(w1, 0, length(w1)), (w2, length(w2), 0)]
        assert evaluate_data(n, data) == operator_word_value(n, data)


def test_schubert_vector_json_and_homogeneity():
    v = X(S1).scale(3) - X(S3)
    assert SchubertVector.from_json(v.to_json(), 4) == v
    assert v.length() == 1
    assert v.paper_degree() == 2
    with pytest.raises(InvalidInputError):
        SchubertVector({S1: 1, identity(4): 1}, 4)


def test_coinvariant_poly_is_int_polynomial():
    assert isinstance(normal_form(IntPolynomial({}, 2)), IntPolynomial)
