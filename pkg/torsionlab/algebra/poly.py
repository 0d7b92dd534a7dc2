"""
Sparse exact-integer polynomials in x_1, ..., x_n.

This module provides IntPolynomial together with the permutation action of
S_n on the variables and the divided difference operators built on it.
"""

import itertools
import logging
from typing import Iterable, Mapping, Sequence

from torsionlab.core.errors import DegreeConditionError, IntegrityError, InvalidInputError
from torsionlab.core.serialization import int_from_json, int_to_json

from .sym import Permutation, is_reduced, length, some_reduced_word


logger = logging.getLogger(__name__)


class IntPolynomial:
    """
    A polynomial with integer coefficients, stored as {exponent tuple: coefficient}.

    Values are immutable; every operation returns a new polynomial. Zero
    coefficients are never stored.
    """

    __slots__ = ("n", "_terms", "_hash")

    def __init__(self, terms: Mapping = None, n: int = 1):
        self.n = n
        cleaned = {}
        for exponents, coeff in (terms or {}).items():
            if coeff:
                if len(exponents) != n:
                    raise InvalidInputError(f"Exponent vector {exponents} has length != {n}")
                cleaned[tuple(exponents)] = int(coeff)
        self._terms = cleaned
        self._hash = None

    @classmethod
    def _raw(cls, terms, n):
        """Wrap an already-clean dict without copying."""
        poly = cls.__new__(cls)
        poly.n = n
        poly._terms = terms
        poly._hash = None
        return poly

    # Inspection

    @property
    def terms(self):
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self):
        return not self._terms

    def degree(self):
        """Algebraic degree (deg x_i = 1); -1 for the zero polynomial."""
        return max((sum(e) for e in self._terms), default=-1)

    def paper_degree(self):
        """Cohomological degree, deg x_i = 2."""
        return 2 * self.degree()

    def is_homogeneous(self):
        return len({sum(e) for e in self._terms}) <= 1

    def is_constant(self):
        return all(not any(e) for e in self._terms)

    def constant_value(self):
        if not self.is_constant():
            raise IntegrityError(f"Expected a constant polynomial, got {self}")
        return self._terms.get((0,) * self.n, 0)

    def coefficient(self, exponents):
        return self._terms.get(tuple(exponents), 0)

    def evaluate(self, point: Sequence[int]):
        if len(point) != self.n:
            raise InvalidInputError(f"Point has {len(point)} coordinates, expected {self.n}")
        total = 0
        for exponents, coeff in self._terms.items():
            value = coeff
            for x, e in zip(point, exponents):
                if e:
                    value *= x ** e
            total += value
        return total

    # Ring structure

    def _check(self, other):
        if self.n != other.n:
            raise InvalidInputError(f"Rank mismatch: {self.n} vs {other.n} variables")

    def __add__(self, other):
        if isinstance(other, int):
            other = constant(other, self.n)
        self._check(other)
        terms = dict(self._terms)
        for exponents, coeff in other._terms.items():
            value = terms.get(exponents, 0) + coeff
            if value:
                terms[exponents] = value
            else:
                terms.pop(exponents, None)
        return IntPolynomial._raw(terms, self.n)

    __radd__ = __add__

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        if isinstance(other, int):
            other = constant(other, self.n)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        self._check(other)
        terms = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                exponents = tuple(a + b for a, b in zip(e1, e2))
                terms[exponents] = terms.get(exponents, 0) + c1 * c2
        return IntPolynomial._raw({e: c for e, c in terms.items() if c}, self.n)

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            raise InvalidInputError("Negative powers are not polynomials")
        result = constant(1, self.n)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c):
        if not c:
            return IntPolynomial._raw({}, self.n)
        return IntPolynomial._raw({e: c * v for e, v in self._terms.items()}, self.n)

    def mul_monomial(self, exponents, c=1):
        """Multiply by c * x^exponents without building a second polynomial."""
        if not c:
            return IntPolynomial._raw({}, self.n)
        return IntPolynomial._raw(
            {tuple(a + b for a, b in zip(e, exponents)): c * v for e, v in self._terms.items()},
            self.n,
        )

    def __eq__(self, other):
        if isinstance(other, int):
            return self == constant(other, self.n)
        if not isinstance(other, IntPolynomial):
            return NotImplemented
        return self.n == other.n and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self._terms.items())))
        return self._hash

    # W-action and divided differences

    def act(self, w: Permutation):
        """Substitute x_i -> x_{w(i)}."""
        if w.n != self.n:
            raise InvalidInputError(f"Rank mismatch: S_{w.n} acting on {self.n} variables")
        images = w.images
        terms = {}
        for exponents, coeff in self._terms.items():
            new = [0] * self.n
            for i, e in enumerate(exponents):
                new[images[i] - 1] = e
            terms[tuple(new)] = coeff
        return IntPolynomial._raw(terms, self.n)

    def swap(self, i):
        """Action of the simple transposition s_i."""
        terms = {}
        for exponents, coeff in self._terms.items():
            new = list(exponents)
            new[i - 1], new[i] = new[i], new[i - 1]
            terms[tuple(new)] = coeff
        return IntPolynomial._raw(terms, self.n)

    def is_symmetric_in(self, i):
        return self.swap(i) == self

    def divided_difference(self, i):
        """
        (f - s_i f) / (x_i - x_{i+1}), monomial by monomial.

        For x_i^u x_{i+1}^v with u > v the quotient is
        x_i^v x_{i+1}^v (x_i^{u-v-1} + x_i^{u-v-2} x_{i+1} + ... + x_{i+1}^{u-v-1});
        the case u < v is the negative of the swapped one and u = v gives 0.
        """
        if not 1 <= i <= self.n - 1:
            raise InvalidInputError(f"Generator s_{i} out of range for {self.n} variables")
        p, q = i - 1, i
        terms = {}
        for exponents, coeff in self._terms.items():
            u, v = exponents[p], exponents[q]
            if u == v:
                continue
            lo, d = min(u, v), abs(u - v)
            signed = coeff if u > v else -coeff
            base = list(exponents)
            for k in range(d):
                base[p] = lo + d - 1 - k
                base[q] = lo + k
                key = tuple(base)
                value = terms.get(key, 0) + signed
                if value:
                    terms[key] = value
                else:
                    del terms[key]
        return IntPolynomial._raw(terms, self.n)

    def demazure(self, w):
        return demazure(w, self)

    # Presentation

    def sorted_terms(self):
        """Terms in graded lexicographic order (highest first)."""
        return sorted(self._terms.items(), key=lambda item: (sum(item[0]), item[0]), reverse=True)

    def __repr__(self):
        return f"IntPolynomial({self}, n={self.n})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for exponents, coeff in self.sorted_terms():
            monomial = "*".join(
                f"x{i}" if e == 1 else f"x{i}^{e}" for i, e in enumerate(exponents, start=1) if e
            )
            if not monomial:
                parts.append(str(coeff))
            elif coeff == 1:
                parts.append(monomial)
            elif coeff == -1:
                parts.append(f"-{monomial}")
            else:
                parts.append(f"{coeff}*{monomial}")
        return " + ".join(parts).replace("+ -", "- ")

    def to_json(self):
        return [[list(e), int_to_json(c)] for e, c in self.sorted_terms()]

    @classmethod
    def from_json(cls, data, n):
        try:
            return cls({tuple(e): int_from_json(c) for e, c in data}, n)
        except (TypeError, ValueError) as e:
            raise InvalidInputError(f"Malformed polynomial JSON: {e}") from e


def constant(c: int, n: int) -> IntPolynomial:
    return IntPolynomial({(0,) * n: c}, n)


def zero(n: int) -> IntPolynomial:
    return IntPolynomial({}, n)


def monomial(exponents: Sequence[int], n: int, c: int = 1) -> IntPolynomial:
    return IntPolynomial({tuple(exponents): c}, n)


def variable(i: int, n: int) -> IntPolynomial:
    """The variable x_i."""
    if not 1 <= i <= n:
        raise InvalidInputError(f"Variable x_{i} out of range for {n} variables")
    exponents = [0] * n
    exponents[i - 1] = 1
    return IntPolynomial({tuple(exponents): 1}, n)


def root(i: int, n: int) -> IntPolynomial:
    """The simple root alpha_i = x_i - x_{i+1}."""
    return variable(i, n) - variable(i + 1, n)


def _monomials(k, indices, n):
    for combo in itertools.combinations_with_replacement(indices, k):
        exponents = [0] * n
        for i in combo:
            exponents[i - 1] += 1
        yield tuple(exponents), combo


def elementary_symmetric(k: int, indices: Iterable[int], n: int) -> IntPolynomial:
    """e_k in the variables x_i, i in indices."""
    indices = list(indices)
    return IntPolynomial(
        {e: 1 for e, combo in _monomials(k, indices, n) if len(set(combo)) == len(combo)}, n
    )


def complete_homogeneous(k: int, indices: Iterable[int], n: int) -> IntPolynomial:
    """h_k in the variables x_i, i in indices."""
    return IntPolynomial({e: 1 for e, _ in _monomials(k, list(indices), n)}, n)


def demazure(w, p: IntPolynomial) -> IntPolynomial:
    """
    Apply d_w = d_{i1} ... d_{ik} for a reduced word s_{i1} ... s_{ik} of w.

    Accepts a Permutation (its canonical reduced word is used) or a Word,
    which must be reduced.
    """
    if isinstance(w, Permutation):
        word = some_reduced_word(w)
    else:
        word = w
        if not is_reduced(word):
            raise InvalidInputError(f"Word {list(word.letters)} is not reduced")
    if word.n != p.n:
        raise InvalidInputError(f"Rank mismatch: S_{word.n} acting on {p.n} variables")
    for i in reversed(word.letters):
        if not p:
            break
        p = p.divided_difference(i)
    return p


def check_degree_condition(data) -> None:
    """Raise DegreeConditionError unless sum l(w_i) = sum a_i + sum b_i."""
    total_length = sum(length(w) for w, _, _ in data)
    a = sum(a_i for _, a_i, _ in data)
    b = sum(b_i for _, _, b_i in data)
    if total_length != a + b:
        raise DegreeConditionError(total_length, a, b)


def operator_word_value(n: int, data) -> int:
    """
    Evaluate d_{w_m}(x_1^{a_m} x_n^{b_m} d_{w_{m-1}}( ... d_{w_1}(x_1^{a_1} x_n^{b_1}) ... )).

    data lists (w_i, a_i, b_i) innermost first. The degree condition forces
    the result to be a constant, returned as an int.
    """
    for w, a_i, b_i in data:
        if w.n != n:
            raise InvalidInputError(f"Permutation {w} is not in S_{n}")
        if a_i < 0 or b_i < 0:
            raise InvalidInputError(f"Exponents must be nonnegative, got ({a_i}, {b_i})")
    check_degree_condition(data)
    f = constant(1, n)
    for w, a_i, b_i in data:
        exponents = [0] * n
        exponents[0] += a_i
        exponents[n - 1] += b_i
        f = demazure(w, f.mul_monomial(exponents))
        if not f:
            logger.debug(f"Operator word vanished at item {(str(w), a_i, b_i)}")
            return 0
    return f.constant_value()
