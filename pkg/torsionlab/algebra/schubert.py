"""
The coinvariant ring in the Schubert basis.

X_w is represented by d_{w w_0}(x_1^{n-1} x_2^{n-2} ... x_{n-1}). Demazure
operators act by d_i X_w = X_{s_i w} when l(s_i w) < l(w) and 0 otherwise;
a linear form f multiplies by the Chevalley rule
f X_w = sum_t <f, e_i - e_j> X_{tw} over transpositions t = (i, j) with
l(tw) = l(w) + 1.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping, Optional, Sequence

import numpy as np
from sympy import Matrix

from torsionlab.core.errors import IntegrityError, InvalidInputError
from torsionlab.core.serialization import int_from_json, int_to_json

from .poly import IntPolynomial, check_degree_condition, complete_homogeneous, demazure, monomial
from .sym import Permutation, compose, identity, length, longest_element, parabolic, permutations_of_length, some_reduced_word


logger = logging.getLogger(__name__)

FIRST = "first"
LAST = "last"


class SchubertVector:
    """An integer combination of Schubert classes, homogeneous in length."""

    __slots__ = ("n", "_coeffs")

    def __init__(self, coeffs: Mapping = None, n: int = 1):
        self.n = n
        self._coeffs = {}
        lengths = set()
        for w, c in (coeffs or {}).items():
            if w.n != n:
                raise InvalidInputError(f"Permutation {w} is not in S_{n}")
            if c:
                self._coeffs[w] = int(c)
                lengths.add(length(w))
        if len(lengths) > 1:
            raise InvalidInputError(f"Schubert vector is not homogeneous: lengths {sorted(lengths)}")

    @classmethod
    def _raw(cls, coeffs, n):
        vector = cls.__new__(cls)
        vector.n = n
        vector._coeffs = coeffs
        return vector

    @classmethod
    def basis(cls, w: Permutation):
        return cls._raw({w: 1}, w.n)

    def items(self):
        return self._coeffs.items()

    def support(self):
        return sorted(self._coeffs)

    def __bool__(self):
        return bool(self._coeffs)

    def __len__(self):
        return len(self._coeffs)

    def length(self):
        """Common length of the support, None for the zero vector."""
        for w in self._coeffs:
            return length(w)
        return None

    def paper_degree(self):
        d = self.length()
        return None if d is None else 2 * d

    def __getitem__(self, w):
        return self._coeffs.get(w, 0)

    def __eq__(self, other):
        if not isinstance(other, SchubertVector):
            return NotImplemented
        return self.n == other.n and self._coeffs == other._coeffs

    def __hash__(self):
        return hash((self.n, frozenset(self._coeffs.items())))

    def __add__(self, other):
        if self.n != other.n:
            raise InvalidInputError(f"Rank mismatch: S_{self.n} vs S_{other.n}")
        coeffs = dict(self._coeffs)
        for w, c in other._coeffs.items():
            value = coeffs.get(w, 0) + c
            if value:
                coeffs[w] = value
            else:
                coeffs.pop(w, None)
        return SchubertVector(coeffs, self.n)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        if not c:
            return SchubertVector._raw({}, self.n)
        return SchubertVector._raw({w: c * v for w, v in self._coeffs.items()}, self.n)

    def __repr__(self):
        body = " + ".join(f"{c}*X[{w}]" for w, c in sorted(self._coeffs.items())) or "0"
        return f"SchubertVector({body}, n={self.n})"

    def to_json(self):
        return [[w.to_json(), int_to_json(c)] for w, c in sorted(self._coeffs.items())]

    @classmethod
    def from_json(cls, data, n):
        try:
            return cls({Permutation.from_json(w): int_from_json(c) for w, c in data}, n)
        except (TypeError, ValueError) as e:
            raise InvalidInputError(f"Malformed Schubert vector JSON: {e}") from e


class CoinvariantPoly(IntPolynomial):
    """A polynomial written in the sub-staircase monomials (exponent of x_i at most n - i)."""

    __slots__ = ()

    def __init__(self, terms: Mapping = None, n: int = 1):
        super().__init__(terms, n)
        for exponents in self._terms:
            if not is_standard(exponents, n):
                raise InvalidInputError(f"Monomial {exponents} is not a sub-staircase monomial")


def is_standard(exponents, n):
    return all(e <= n - k for k, e in enumerate(exponents, start=1))


def staircase(n: int) -> IntPolynomial:
    """x_1^{n-1} x_2^{n-2} ... x_{n-1}."""
    return monomial(tuple(n - k for k in range(1, n + 1)), n)


@lru_cache(maxsize=None)
def schubert_rep(w: Permutation) -> IntPolynomial:
    """The Schubert polynomial representative of X_w."""
    w0 = longest_element(parabolic(range(1, w.n), w.n), w.n)
    return demazure(compose(w, w0), staircase(w.n))


def demazure_schubert(i: int, v: SchubertVector) -> SchubertVector:
    if not 1 <= i <= v.n - 1:
        raise InvalidInputError(f"Generator s_{i} out of range for S_{v.n}")
    return SchubertVector._raw(
        {w.left_mul_simple(i): c for w, c in v.items() if w.has_left_descent(i)}, v.n
    )


def demazure_schubert_word(letters: Sequence[int], v: SchubertVector) -> SchubertVector:
    """d_{i1} ... d_{ik} applied to v (the last letter acts first)."""
    for i in reversed(letters):
        if not v:
            break
        v = demazure_schubert(i, v)
    return v


def _covers(w: Permutation, i: int, j: int) -> bool:
    """l((i j) w) = l(w) + 1: i stands left of j and no value in between sits between them."""
    positions = w.positions()
    p, q = positions[i], positions[j]
    if p > q:
        return False
    return not any(i < w.images[k] < j for k in range(p, q - 1))


def linear_coefficients(f: IntPolynomial):
    """Coefficients (c_1, ..., c_n) of a linear form f."""
    coeffs = [0] * f.n
    for exponents, c in f.items():
        if sum(exponents) != 1:
            raise InvalidInputError(f"Chevalley multiplication needs a linear form, got {f}")
        coeffs[exponents.index(1)] = c
    return coeffs


def chevalley_mul(f: IntPolynomial, v: SchubertVector) -> SchubertVector:
    if f.n != v.n:
        raise InvalidInputError(f"Rank mismatch: {f.n} variables against S_{v.n}")
    c = linear_coefficients(f)
    n = v.n
    result = {}
    for w, coeff in v.items():
        for i in range(1, n):
            for j in range(i + 1, n + 1):
                pairing = c[i - 1] - c[j - 1]
                if pairing and _covers(w, i, j):
                    tw = w.left_mul_transposition(i, j)
                    result[tw] = result.get(tw, 0) + pairing * coeff
    return SchubertVector._raw({w: c for w, c in result.items() if c}, n)


def _variable_coefficients(which: str, n: int):
    if which == FIRST:
        k = 1
    elif which == LAST:
        k = n
    else:
        raise InvalidInputError(f"Expected '{FIRST}' or '{LAST}', got {which!r}")
    coeffs = [0] * n
    coeffs[k - 1] = 1
    return coeffs


def mul_power(v: SchubertVector, which: str, k: int) -> SchubertVector:
    """Multiply k times by x_1 (which='first') or x_n (which='last')."""
    if k < 0:
        raise InvalidInputError(f"Power must be nonnegative, got {k}")
    exponents = _variable_coefficients(which, v.n)
    f = monomial(exponents, v.n)
    for _ in range(k):
        if not v:
            break
        v = chevalley_mul(f, v)
    return v


@lru_cache(maxsize=None)
def _reducers(n: int):
    """
    For each k, the tail h_{n-k+1}(x_1, ..., x_k) - x_k^{n-k+1}.

    The polynomials h_{n-k+1}(x_1, ..., x_k), k = 1..n, form a monic Groebner
    basis of the coinvariant ideal for lex order with x_n > ... > x_1; their
    leading monomials x_k^{n-k+1} cut out the sub-staircase basis.
    """
    reducers = {}
    for k in range(1, n + 1):
        j = n - k + 1
        h = complete_homogeneous(j, range(1, k + 1), n)
        lead = [0] * n
        lead[k - 1] = j
        reducers[k] = (j, list((h - monomial(lead, n)).items()))
    return reducers


def normal_form(p: IntPolynomial) -> CoinvariantPoly:
    """Reduce p modulo the positive-degree symmetric polynomials."""
    n = p.n
    reducers = _reducers(n)
    current = dict(p.items())
    standard = {}
    while current:
        pending = {}
        for exponents, c in current.items():
            k = next((k for k, e in enumerate(exponents, start=1) if e > n - k), None)
            if k is None:
                value = standard.get(exponents, 0) + c
                if value:
                    standard[exponents] = value
                else:
                    standard.pop(exponents, None)
                continue
            j, tail = reducers[k]
            base = list(exponents)
            base[k - 1] -= j
            for t, tc in tail:
                key = tuple(a + b for a, b in zip(base, t))
                value = pending.get(key, 0) - c * tc
                if value:
                    pending[key] = value
                else:
                    pending.pop(key, None)
        current = pending
    return CoinvariantPoly(standard, n)


@lru_cache(maxsize=None)
def _expansion_system(n: int, d: int):
    """Permutations of length d, standard monomials of degree d, and the inverse change of basis."""
    perms = permutations_of_length(n, d)
    reps = [normal_form(schubert_rep(w)) for w in perms]
    monomials = sorted({e for rep in reps for e in rep.terms})
    if len(monomials) != len(perms):
        raise IntegrityError(f"Schubert representatives do not span degree {d} of the coinvariant ring of S_{n}")
    index = {e: r for r, e in enumerate(monomials)}
    A = Matrix.zeros(len(monomials), len(perms))
    for col, rep in enumerate(reps):
        for e, c in rep.items():
            A[index[e], col] = c
    return perms, index, A.inv()


def expand(p: IntPolynomial) -> SchubertVector:
    """Write a homogeneous polynomial as sum c_w X_w in the coinvariant ring."""
    if not p.is_homogeneous():
        raise InvalidInputError(f"expand needs a homogeneous polynomial, got {p}")
    n = p.n
    reduced = normal_form(p)
    if not reduced:
        return SchubertVector._raw({}, n)
    d = reduced.degree()
    perms, index, inverse = _expansion_system(n, d)
    rhs = Matrix.zeros(len(index), 1)
    for e, c in reduced.items():
        rhs[index[e], 0] = c
    solution = inverse * rhs
    coeffs = {}
    for w, value in zip(perms, solution):
        if not value.is_integer:
            raise IntegrityError(f"Non-integral Schubert coefficient {value} for X_{w}")
        if value:
            coeffs[w] = int(value)
    return SchubertVector._raw(coeffs, n)


def extract_coefficient(v: SchubertVector, w: Permutation, check: bool = False) -> int:
    """
    Coefficient of X_w in v.

    With check=True the coefficient is also read off by applying d_{w^{-1}}
    (Demazure operators along the letters of w, left to right) and taking the
    coefficient of X_id; the two readings must agree.
    """
    d = v.length()
    if d is not None and d != length(w):
        raise InvalidInputError(f"Length mismatch: vector lives in length {d}, X_{w} has length {length(w)}")
    direct = v[w]
    if check:
        letters = some_reduced_word(w).letters
        via_demazure = demazure_schubert_word(tuple(reversed(letters)), v)[identity(v.n)]
        if via_demazure != direct:
            raise IntegrityError(f"Coefficient of X_{w}: lookup {direct} != Demazure reading {via_demazure}")
    return direct


def apply_item(v: SchubertVector, w: Permutation, a: int, b: int) -> SchubertVector:
    """h -> d_w(x_1^a x_n^b h) on the Schubert side."""
    v = mul_power(mul_power(v, FIRST, a), LAST, b)
    return demazure_schubert_word(some_reduced_word(w).letters, v)


def evaluate_data(n: int, data) -> int:
    """The operator word value computed in the Schubert basis, starting from X_id."""
    check_degree_condition(data)
    v = SchubertVector.basis(identity(n))
    for w, a, b in data:
        v = apply_item(v, w, a, b)
        if not v:
            return 0
    return extract_coefficient(v, identity(n))


def _steps_of(op):
    """Normalize an operator to a list of (w, a, b) steps, innermost first."""
    steps = getattr(op, "steps", op)
    if isinstance(steps, tuple) and len(steps) == 3 and isinstance(steps[0], Permutation):
        steps = [steps]
    return [(step[0], step[1], step[2]) for step in steps]


@dataclass(frozen=True)
class OperatorMatrix:
    """Matrix of a degree-zero operator on one homogeneous component, in the Schubert basis."""

    n: int
    degree: int
    basis: tuple
    rows: tuple

    def as_array(self):
        return np.array(self.rows, dtype=object).reshape(len(self.basis), len(self.basis))

    def column(self, w):
        c = self.basis.index(w)
        return [row[c] for row in self.rows]

    def to_json(self):
        return {
            "n": self.n,
            "degree": self.degree,
            "basis": [w.to_json() for w in self.basis],
            "rows": [[int_to_json(x) for x in row] for row in self.rows],
        }


def apply_operator(op, v: SchubertVector) -> SchubertVector:
    for w, a, b in _steps_of(op):
        v = apply_item(v, w, a, b)
    return v


def operator_matrix(op, degree: int, n: int, basis: Optional[Sequence[Permutation]] = None) -> OperatorMatrix:
    """
    Matrix M with M[r][c] = coefficient of basis[r] in op(basis[c]).

    The default basis is every permutation of length `degree` in canonical
    order. A smaller basis must span an op-invariant submodule.
    """
    steps = _steps_of(op)
    if sum(length(w) for w, _, _ in steps) != sum(a + b for _, a, b in steps):
        raise InvalidInputError("Operator is not of degree zero")
    if basis is None:
        basis = permutations_of_length(n, degree)
    basis = tuple(basis)
    for w in basis:
        if length(w) != degree or w.n != n:
            raise InvalidInputError(f"Basis element {w} is not of length {degree} in S_{n}")
    positions = {w: r for r, w in enumerate(basis)}
    rows = [[0] * len(basis) for _ in basis]
    for c, w in enumerate(basis):
        image = apply_operator(steps, SchubertVector.basis(w))
        for u, coeff in image.items():
            if u not in positions:
                raise InvalidInputError(f"Operator image of X_{w} leaves the span of the basis (hits X_{u})")
            rows[positions[u]][c] = coeff
    return OperatorMatrix(n, degree, basis, tuple(tuple(row) for row in rows))
