"""
2x2 integer matrices and the semigroups Gamma and Gamma_A.

Gamma is generated by L = [[1, 0], [1, 1]] and R = [[1, 1], [0, 1]].
Gamma_A is generated by the products [[a, 1], [1, 0]] [[b, 1], [1, 0]]
= [[ab + 1, a], [b, 1]] = R^a L^b with 1 <= a, b <= A, so every Gamma_A
word of length l_A is a Gamma word of length at most 2 A l_A.
"""

from dataclasses import dataclass
from functools import reduce
from typing import Sequence, Tuple

from sympy import fibonacci

from torsionlab.core.errors import IntegrityError, InvalidInputError
from torsionlab.core.serialization import int_to_json


@dataclass(frozen=True)
class Mat2:
    """[[a11, a12], [a21, a22]] with exact integer entries."""

    a11: int
    a12: int
    a21: int
    a22: int

    def __mul__(self, other):
        return Mat2(
            self.a11 * other.a11 + self.a12 * other.a21,
            self.a11 * other.a12 + self.a12 * other.a22,
            self.a21 * other.a11 + self.a22 * other.a21,
            self.a21 * other.a12 + self.a22 * other.a22,
        )

    def __neg__(self):
        return Mat2(-self.a11, -self.a12, -self.a21, -self.a22)

    def __pow__(self, k):
        if k < 0:
            raise InvalidInputError("Semigroup elements have no negative powers")
        return reduce(lambda x, _: x * self, range(k), IDENTITY)

    def det(self):
        return self.a11 * self.a22 - self.a12 * self.a21

    def entries(self):
        return (self.a11, self.a12, self.a21, self.a22)

    def rows(self):
        return ((self.a11, self.a12), (self.a21, self.a22))

    def entry(self, row, column):
        return self.rows()[row][column]

    def sup_norm(self):
        return max(abs(x) for x in self.entries())

    def is_nonnegative(self):
        return all(x >= 0 for x in self.entries())

    def __str__(self):
        return f"[[{self.a11}, {self.a12}], [{self.a21}, {self.a22}]]"

    def to_json(self):
        return [[int_to_json(x) for x in row] for row in self.rows()]

    @classmethod
    def from_rows(cls, rows):
        (a11, a12), (a21, a22) = rows
        return cls(int(a11), int(a12), int(a21), int(a22))


IDENTITY = Mat2(1, 0, 0, 1)
L = Mat2(1, 0, 1, 1)
R = Mat2(1, 1, 0, 1)
GAMMA_LETTERS = {"L": L, "R": R}


def parse_gamma_word(word) -> Tuple[str, ...]:
    letters = tuple(word.strip().upper()) if isinstance(word, str) else tuple(word)
    for ch in letters:
        if ch not in GAMMA_LETTERS:
            raise InvalidInputError(f"Gamma words use the letters L and R, got {ch!r}")
    return letters


def gamma_product(word) -> Mat2:
    """Product of the generators, left to right."""
    return reduce(lambda acc, ch: acc * GAMMA_LETTERS[ch], parse_gamma_word(word), IDENTITY)


def gamma_a_generator(a: int, b: int, A: int) -> Mat2:
    """[[a, 1], [1, 0]] [[b, 1], [1, 0]], checked against R^a L^b."""
    if not (1 <= a <= A and 1 <= b <= A):
        raise InvalidInputError(f"Generator ({a}, {b}) needs 1 <= a, b <= {A}")
    g = Mat2(a, 1, 1, 0) * Mat2(b, 1, 1, 0)
    if g != (R ** a) * (L ** b) or g != Mat2(a * b + 1, a, b, 1):
        raise IntegrityError(f"Generator ({a}, {b}) disagrees with R^{a} L^{b}")
    return g


@dataclass(frozen=True)
class SemigroupWord:
    """
    A word in Gamma (letters 'L', 'R') or in Gamma_A (letters (a, b)).

    alphabet is 'gamma' or 'gamma_A'; A is only used for Gamma_A.
    """

    alphabet: str
    letters: tuple
    A: int = 0

    def __post_init__(self):
        if self.alphabet == "gamma":
            object.__setattr__(self, "letters", parse_gamma_word(self.letters))
        elif self.alphabet == "gamma_A":
            letters = tuple((int(a), int(b)) for a, b in self.letters)
            for a, b in letters:
                if not (1 <= a <= self.A and 1 <= b <= self.A):
                    raise InvalidInputError(f"Letter ({a}, {b}) is outside Gamma_{self.A}")
            object.__setattr__(self, "letters", letters)
        else:
            raise InvalidInputError(f"Unknown alphabet {self.alphabet!r}")

    def __len__(self):
        return len(self.letters)

    @property
    def product(self) -> Mat2:
        if self.alphabet == "gamma":
            return gamma_product(self.letters)
        return reduce(lambda acc, ab: acc * gamma_a_generator(ab[0], ab[1], self.A), self.letters, IDENTITY)

    def to_gamma(self) -> "SemigroupWord":
        """Rewrite each (a, b) as R^a L^b; the length is at most 2 A l_A."""
        if self.alphabet == "gamma":
            return self
        letters = tuple(ch for a, b in self.letters for ch in "R" * a + "L" * b)
        converted = SemigroupWord("gamma", letters)
        if len(converted) > 2 * self.A * len(self):
            raise IntegrityError(f"Converted length {len(converted)} exceeds 2 A l_A = {2 * self.A * len(self)}")
        return converted

    def to_json(self):
        if self.alphabet == "gamma":
            return {"alphabet": "gamma", "letters": "".join(self.letters)}
        return {"alphabet": "gamma_A", "A": self.A, "letters": [list(ab) for ab in self.letters]}


def norm_bound_check(word: Sequence, A: int) -> bool:
    """
    gamma_11 >= F_{2 l_A + 1} for a nonempty Gamma_A word.

    Also checks that gamma_11 is the sup norm of gamma.
    """
    w = word if isinstance(word, SemigroupWord) else SemigroupWord("gamma_A", tuple(word), A)
    if not len(w):
        raise InvalidInputError("The norm bound needs a nonempty word")
    g = w.product
    if g.a11 != g.sup_norm():
        raise IntegrityError(f"gamma_11 = {g.a11} is not the sup norm of {g}")
    return g.a11 >= int(fibonacci(2 * len(w) + 1))
