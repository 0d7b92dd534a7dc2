"""
Degree-zero operators on the coinvariant ring and the named operator sets.

An OperatorStep (w, a, b) is the map h -> d_w(x_1^a x_n^b h); it has degree
zero when l(w) = a + b. An Operator is a sequence of steps applied in order,
and every step corresponds to one item of operator word data.
"""

import logging
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from torsionlab.algebra.poly import IntPolynomial, monomial
from torsionlab.algebra.schubert import SchubertVector, apply_operator, expand, operator_matrix
from torsionlab.algebra.sym import Permutation, from_letters, length, some_reduced_word
from torsionlab.core.errors import InvalidInputError


logger = logging.getLogger(__name__)


class OperatorStep(NamedTuple):
    w: Permutation
    a: int
    b: int

    def is_degree_zero(self):
        return length(self.w) == self.a + self.b

    def label(self):
        word = "".join(str(i) for i in some_reduced_word(self.w).letters)
        n = self.w.n
        parts = [f"d{word}" if word else ""]
        if self.a:
            parts.append(f"x1^{self.a}" if self.a > 1 else "x1")
        if self.b:
            parts.append(f"x{n}^{self.b}" if self.b > 1 else f"x{n}")
        return "".join(parts) or "id"


def step(letters, a, b, n):
    """Shorthand: the step d_{s_i1 ... s_ik}(x_1^a x_n^b -)."""
    return OperatorStep(from_letters(letters, n), a, b)


@dataclass(frozen=True)
class Operator:
    """A named composite of degree-zero steps, innermost first."""

    name: str
    n: int
    steps: tuple

    def __post_init__(self):
        for s in self.steps:
            if s.w.n != self.n:
                raise InvalidInputError(f"Step {s.label()} is not in S_{self.n}")
            if not s.is_degree_zero():
                raise InvalidInputError(f"Step {s.label()} of operator {self.name} is not of degree zero")

    @property
    def a(self):
        return sum(s.a for s in self.steps)

    @property
    def b(self):
        return sum(s.b for s in self.steps)

    @property
    def weight(self):
        """Contribution a + b of one application to the rank N."""
        return self.a + self.b

    def apply(self, v: SchubertVector) -> SchubertVector:
        return apply_operator(self.steps, v)

    def matrix(self, degree, basis=None):
        return operator_matrix(self.steps, degree, self.n, basis)


@dataclass(frozen=True)
class OperatorSet:
    name: str
    n: int
    operators: tuple
    description: str = ""
    seeds: tuple = ()

    def by_name(self, name):
        for op in self.operators:
            if op.name == name:
                return op
        raise InvalidInputError(f"Operator set {self.name} has no operator {name!r}")


def paper8_operators(n=5):
    """d_{k..1} x_1^k and d_{n-k..n-1} x_n^k for k = 1, ..., n-1."""
    operators = []
    for k in range(n - 1, 0, -1):
        s = step(range(k, 0, -1), k, 0, n)
        operators.append(Operator(s.label(), n, (s,)))
    for k in range(n - 1, 0, -1):
        s = step(range(n - k, n), 0, k, n)
        operators.append(Operator(s.label(), n, (s,)))
    return OperatorSet("paper8", n, tuple(operators), "single-step degree zero operators on x_1 and x_n",
                       ("x1^3", f"x1^2*x{n}"))


def fibonacci_operators():
    """F: h -> d_23(x_4^2 d_1(x_1 h)) in S_4."""
    F = Operator("F", 4, (step([1], 1, 0, 4), step([2, 3], 0, 2, 4)))
    return OperatorSet("fibonacci", 4, (F,), "the Fibonacci operator on span{X_1, X_3}", ("x1",))


def ulu_operators():
    """U_l: h -> d_21(x_1^2 d_1(x_1 h)) and U_u: h -> d_23(x_4^2 d_3(x_4 h)) in S_4."""
    U_l = Operator("L", 4, (step([1], 1, 0, 4), step([2, 1], 2, 0, 4)))
    U_u = Operator("U", 4, (step([3], 0, 1, 4), step([2, 3], 0, 2, 4)))
    return OperatorSet("ulu", 4, (U_l, U_u), "lower and upper unipotent operators on span{X_1, X_3}", ("x1",))


OPERATOR_SETS = {
    "paper8": paper8_operators,
    "fibonacci": fibonacci_operators,
    "ulu": ulu_operators,
}


def get_operator_set(name, n=None):
    if name not in OPERATOR_SETS:
        raise InvalidInputError(f"Unknown operator set {name!r}; choose from {sorted(OPERATOR_SETS)}")
    if name == "paper8":
        return paper8_operators(n or 5)
    ops = OPERATOR_SETS[name]()
    if n is not None and n != ops.n:
        raise InvalidInputError(f"Operator set {name} lives in S_{ops.n}, not S_{n}")
    return ops


_SEED_FACTOR = re.compile(r"^x(\d+)(?:\^(\d+))?$")


@dataclass(frozen=True)
class Seed:
    """A starting monomial x_1^p x_n^q."""

    n: int
    p: int
    q: int
    text: str = ""

    @property
    def degree(self):
        return self.p + self.q

    def polynomial(self) -> IntPolynomial:
        exponents = [0] * self.n
        exponents[0] += self.p
        exponents[self.n - 1] += self.q
        return monomial(exponents, self.n)

    def vector(self) -> SchubertVector:
        return expand(self.polynomial())

    def label(self):
        return self.text or f"x1^{self.p}*x{self.n}^{self.q}"


def parse_seed(text, n):
    """Parse 'x1^3', 'x1^2*x5' or '1' into a Seed over S_n."""
    p = q = 0
    cleaned = text.replace(" ", "")
    if cleaned != "1":
        for factor in cleaned.split("*"):
            match = _SEED_FACTOR.match(factor)
            if not match:
                raise InvalidInputError(f"Cannot parse seed factor {factor!r} in {text!r}")
            var, power = int(match.group(1)), int(match.group(2) or 1)
            if var == 1:
                p += power
            elif var == n:
                q += power
            else:
                raise InvalidInputError(f"Seeds may only involve x1 and x{n}, got x{var}")
    return Seed(n, p, q, cleaned)


@lru_cache(maxsize=None)
def operator_arrays(ops: OperatorSet, degree: int):
    """Object-dtype matrices of every operator on the given homogeneous component."""
    arrays = []
    basis = None
    for op in ops.operators:
        m = op.matrix(degree)
        basis = m.basis
        arrays.append(m.as_array())
    logger.debug(f"Built {len(arrays)} operator matrices of size {len(basis or ())} for {ops.name}, degree {degree}")
    return basis, tuple(arrays)


def vector_to_array(v: SchubertVector, basis) -> np.ndarray:
    return np.array([v[w] for w in basis], dtype=object)
