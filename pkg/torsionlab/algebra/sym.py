"""
Symmetric group combinatorics in type A.

Permutations are stored in one-line notation with 1-based images, so the
permutation w sends k to w.images[k - 1]. Words are sequences of generator
indices i standing for the simple transposition s_i = (i, i+1), multiplied
left to right.
"""

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from torsionlab.core.errors import InvalidInputError


@dataclass(frozen=True)
class Permutation:
    """An element of S_n in one-line notation."""

    images: tuple

    def __post_init__(self):
        images = tuple(int(k) for k in self.images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise InvalidInputError(f"Not a permutation of 1..{len(images)}: {images}")
        object.__setattr__(self, "images", images)

    @property
    def n(self):
        return len(self.images)

    def __call__(self, k):
        return self.images[k - 1]

    def __mul__(self, other):
        return compose(self, other)

    def __lt__(self, other):
        return sort_key(self) < sort_key(other)

    def __str__(self):
        return "".join(str(k) for k in self.images) if self.n < 10 else str(list(self.images))

    def length(self):
        return length(self)

    def inverse(self):
        inv = [0] * self.n
        for position, value in enumerate(self.images, start=1):
            inv[value - 1] = position
        return Permutation(tuple(inv))

    def positions(self):
        """Map value -> position (the inverse in one-line notation)."""
        return {value: position for position, value in enumerate(self.images, start=1)}

    def right_mul_simple(self, i):
        """w * s_i: swap the entries at positions i and i+1."""
        images = list(self.images)
        images[i - 1], images[i] = images[i], images[i - 1]
        return Permutation(tuple(images))

    def left_mul_simple(self, i):
        """s_i * w: swap the values i and i+1."""
        return Permutation(tuple(i + 1 if k == i else i if k == i + 1 else k for k in self.images))

    def left_mul_transposition(self, i, j):
        """(i j) * w: swap the values i and j."""
        return Permutation(tuple(j if k == i else i if k == j else k for k in self.images))

    def has_right_descent(self, i):
        return self.images[i - 1] > self.images[i]

    def has_left_descent(self, i):
        positions = self.positions()
        return positions[i] > positions[i + 1]

    def right_descents(self):
        return frozenset(i for i in range(1, self.n) if self.has_right_descent(i))

    def left_descents(self):
        return frozenset(i for i in range(1, self.n) if self.has_left_descent(i))

    def is_identity(self):
        return all(k == value for k, value in enumerate(self.images, start=1))

    def to_json(self):
        return list(self.images)

    @classmethod
    def from_json(cls, data):
        if not isinstance(data, (list, tuple)):
            raise InvalidInputError(f"Permutation must be an array of images, got {data!r}")
        return cls(tuple(data))


@dataclass(frozen=True)
class Word:
    """A word in the simple transpositions of S_n."""

    letters: tuple
    n: int

    def __post_init__(self):
        letters = tuple(int(i) for i in self.letters)
        for i in letters:
            if not 1 <= i <= self.n - 1:
                raise InvalidInputError(f"Generator s_{i} out of range for S_{self.n}")
        object.__setattr__(self, "letters", letters)

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __add__(self, other):
        if self.n != other.n:
            raise InvalidInputError(f"Rank mismatch: S_{self.n} vs S_{other.n}")
        return Word(self.letters + other.letters, self.n)

    def reversed(self):
        return Word(tuple(reversed(self.letters)), self.n)

    def shifted(self, offset, n):
        """Relabel s_i as s_{i+offset} inside S_n."""
        return Word(tuple(i + offset for i in self.letters), n)

    def to_perm(self):
        return word_to_perm(self)

    def is_reduced(self):
        return is_reduced(self)

    def to_json(self):
        return list(self.letters)

    @classmethod
    def from_json(cls, data, n):
        if not isinstance(data, (list, tuple)):
            raise InvalidInputError(f"Word must be an array of generator indices, got {data!r}")
        return cls(tuple(data), n)


@dataclass(frozen=True)
class ParabolicSet:
    """A subset I of {1, ..., n-1} naming the parabolic subgroup W_I."""

    indices: frozenset
    n: int

    def __post_init__(self):
        indices = frozenset(int(i) for i in self.indices)
        bad = [i for i in indices if not 1 <= i <= self.n - 1]
        if bad:
            raise InvalidInputError(f"Indices {sorted(bad)} are not generators of S_{self.n}")
        object.__setattr__(self, "indices", indices)

    def __contains__(self, i):
        return i in self.indices

    def __iter__(self):
        return iter(sorted(self.indices))

    def __len__(self):
        return len(self.indices)

    def blocks(self):
        """Maximal runs of consecutive indices, each as a tuple."""
        runs = []
        for i in sorted(self.indices):
            if runs and runs[-1][-1] == i - 1:
                runs[-1].append(i)
            else:
                runs.append([i])
        return [tuple(run) for run in runs]

    def complement(self):
        return ParabolicSet(frozenset(range(1, self.n)) - self.indices, self.n)

    def to_json(self):
        return sorted(self.indices)

    @classmethod
    def from_json(cls, data, n):
        return cls(frozenset(data), n)


def parabolic(indices: Iterable[int], n: int) -> ParabolicSet:
    return ParabolicSet(frozenset(indices), n)


def identity(n: int) -> Permutation:
    if n < 1:
        raise InvalidInputError(f"Rank must be at least 1, got {n}")
    return Permutation(tuple(range(1, n + 1)))


def simple(i: int, n: int) -> Permutation:
    """The simple transposition s_i in S_n."""
    if not 1 <= i <= n - 1:
        raise InvalidInputError(f"Generator s_{i} out of range for S_{n}")
    return identity(n).right_mul_simple(i)


def compose(u: Permutation, v: Permutation) -> Permutation:
    """(u o v)(k) = u(v(k))."""
    if u.n != v.n:
        raise InvalidInputError(f"Rank mismatch: S_{u.n} vs S_{v.n}")
    return Permutation(tuple(u.images[k - 1] for k in v.images))


def length(w: Permutation) -> int:
    """Number of inversions."""
    images = w.images
    return sum(1 for i, j in itertools.combinations(range(len(images)), 2) if images[i] > images[j])


def word_to_perm(word: Word) -> Permutation:
    w = identity(word.n)
    for i in word.letters:
        w = w.right_mul_simple(i)
    return w


def is_reduced(word: Word) -> bool:
    return len(word) == length(word_to_perm(word))


@lru_cache(maxsize=None)
def _staircase_letters(images):
    current = list(images)
    swaps = []
    for k in range(len(current), 1, -1):
        position = current.index(k) + 1
        for j in range(position, k):
            current[j - 1], current[j] = current[j], current[j - 1]
            swaps.append(j)
    return tuple(reversed(swaps))


def some_reduced_word(w: Permutation) -> Word:
    """
    Canonical reduced word (staircase normal form).

    Bubble sort w back to the identity by moving the value k to position k for
    k = n, ..., 2; every swap removes one inversion. If w s_{j1} ... s_{jl} is the
    identity then w = s_{jl} ... s_{j1}, a concatenation of descending runs.
    """
    return Word(_staircase_letters(w.images), w.n)


def longest_element(I: ParabolicSet, n: int) -> Permutation:
    """The longest element w_I of W_I: reverse every connected block."""
    images = list(range(1, n + 1))
    for block in I.blocks():
        lo, hi = block[0], block[-1] + 1
        images[lo - 1:hi] = reversed(images[lo - 1:hi])
    return Permutation(tuple(images))


def is_min_coset_rep(w: Permutation, I: ParabolicSet) -> bool:
    """True iff w has no right descent in I, i.e. w is minimal in w W_I."""
    return not any(w.has_right_descent(j) for j in I)


def min_coset_rep(w: Permutation, I: ParabolicSet) -> Permutation:
    """Minimal representative of w W_I: sort the values inside each block of positions."""
    images = list(w.images)
    for block in I.blocks():
        lo, hi = block[0], block[-1] + 1
        images[lo - 1:hi] = sorted(images[lo - 1:hi])
    return Permutation(tuple(images))


def in_parabolic(w: Permutation, I: ParabolicSet) -> bool:
    """True iff w lies in W_I (the support of a reduced word sits inside I)."""
    return all(j in I for j in some_reduced_word(w))


def bruhat_leq_images(u: tuple, v: tuple) -> bool:
    """Tableau criterion on one-line images: every sorted prefix of u is dominated by that of v."""
    for i in range(1, len(u)):
        if any(x > y for x, y in zip(sorted(u[:i]), sorted(v[:i]))):
            return False
    return True


def bruhat_leq(u: Permutation, v: Permutation) -> bool:
    if u.n != v.n:
        raise InvalidInputError(f"Rank mismatch: S_{u.n} vs S_{v.n}")
    return bruhat_leq_images(u.images, v.images)


def sort_key(w: Permutation):
    """Canonical order: graded by length, then lexicographic on one-line notation."""
    return (length(w), w.images)


def all_permutations(n: int) -> list:
    return sorted((Permutation(p) for p in itertools.permutations(range(1, n + 1))), key=sort_key)


@lru_cache(maxsize=None)
def permutations_of_length(n: int, d: int) -> tuple:
    """All w in S_n with l(w) = d, in canonical order."""
    return tuple(w for w in all_permutations(n) if length(w) == d)


def iter_words(n: int, max_length: int) -> Iterator[Word]:
    for size in range(max_length + 1):
        for letters in itertools.product(range(1, n), repeat=size):
            yield Word(letters, n)


def from_letters(letters: Sequence[int], n: int) -> Permutation:
    """Shorthand: the product s_{i1} ... s_{ik} in S_n."""
    return word_to_perm(Word(tuple(letters), n))
