"""
The nil Hecke ring NH over R = Z[x_1, ..., x_n].

Elements are finite sums sum_x f_x D_x with polynomial coefficients on the
left. Products are expanded one simple factor at a time using

    D_i f = s_i(f) D_i + d_i(f),    D_i D_x = D_{s_i x} if l(s_i x) > l(x), else 0.
"""

import logging
from collections import Counter
from typing import Iterable, Mapping, Optional

from torsionlab.core.errors import InvalidInputError

from .poly import IntPolynomial, constant, demazure
from .sym import Permutation, identity, length, parabolic, some_reduced_word


logger = logging.getLogger(__name__)


class NilHeckeElement:
    """A finite left R-linear combination of the basis symbols D_x."""

    __slots__ = ("n", "_terms")

    def __init__(self, terms: Mapping = None, n: int = 1):
        self.n = n
        self._terms = {}
        for x, f in (terms or {}).items():
            if x.n != n or f.n != n:
                raise InvalidInputError(f"Term {x} has the wrong rank for NH_{n}")
            if f:
                self._terms[x] = f

    @classmethod
    def _raw(cls, terms, n):
        element = cls.__new__(cls)
        element.n = n
        element._terms = terms
        return element

    def items(self):
        return self._terms.items()

    def support(self):
        return sorted(self._terms)

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if not isinstance(other, NilHeckeElement):
            return NotImplemented
        return self.n == other.n and self._terms == other._terms

    def __hash__(self):
        return hash((self.n, frozenset(self._terms.items())))

    def _check(self, other):
        if self.n != other.n:
            raise InvalidInputError(f"Rank mismatch: NH_{self.n} vs NH_{other.n}")

    def __add__(self, other):
        self._check(other)
        terms = dict(self._terms)
        for x, f in other._terms.items():
            g = terms[x] + f if x in terms else f
            if g:
                terms[x] = g
            else:
                terms.pop(x, None)
        return NilHeckeElement._raw(terms, self.n)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        return multiply(self, other)

    def scale(self, c):
        if not c:
            return NilHeckeElement._raw({}, self.n)
        return NilHeckeElement._raw({x: f.scale(c) for x, f in self._terms.items()}, self.n)

    def left_mul_poly(self, g: IntPolynomial):
        """g * (sum f_x D_x) = sum (g f_x) D_x."""
        if g.n != self.n:
            raise InvalidInputError(f"Rank mismatch: {g.n} variables in NH_{self.n}")
        terms = {}
        for x, f in self._terms.items():
            h = g * f
            if h:
                terms[x] = h
        return NilHeckeElement._raw(terms, self.n)

    def left_mul_d(self, i):
        """D_i * (sum f_x D_x), via D_i f = s_i(f) D_i + d_i(f)."""
        if not 1 <= i <= self.n - 1:
            raise InvalidInputError(f"Generator D_{i} out of range for NH_{self.n}")
        terms = {}

        def accumulate(x, f):
            if x in terms:
                g = terms[x] + f
                if g:
                    terms[x] = g
                else:
                    del terms[x]
            else:
                terms[x] = f

        for x, f in self._terms.items():
            if not x.has_left_descent(i):
                accumulate(x.left_mul_simple(i), f.swap(i))
            df = f.divided_difference(i)
            if df:
                accumulate(x, df)
        return NilHeckeElement._raw(terms, self.n)

    def coefficient_of(self, w: Permutation) -> IntPolynomial:
        return coefficient_of(self, w)

    def act_on_poly(self, p: IntPolynomial) -> IntPolynomial:
        return act_on_poly(self, p)

    def term_degrees(self):
        """Degree of every term f_x D_x with deg x_i = 1 and deg D_x = -l(x)."""
        return {x: f.degree() - length(x) for x, f in self._terms.items()}

    def __repr__(self):
        body = " + ".join(f"({f})*D[{x}]" for x, f in sorted(self._terms.items())) or "0"
        return f"NilHeckeElement({body}, n={self.n})"

    def to_json(self):
        return [[x.to_json(), f.to_json()] for x, f in sorted(self._terms.items())]


def unit(n: int) -> NilHeckeElement:
    return NilHeckeElement._raw({identity(n): constant(1, n)}, n)


def d_of(w: Permutation) -> NilHeckeElement:
    """The basis element 1 * D_w."""
    return NilHeckeElement._raw({w: constant(1, w.n)}, w.n)


def scalar(f: IntPolynomial) -> NilHeckeElement:
    """The polynomial f viewed as f * D_id."""
    if not f:
        return NilHeckeElement._raw({}, f.n)
    return NilHeckeElement._raw({identity(f.n): f}, f.n)


def apply_d_word(x: Permutation, b: NilHeckeElement) -> NilHeckeElement:
    """D_x * b, applying the letters of a reduced word of x from the right."""
    for i in reversed(some_reduced_word(x).letters):
        if not b:
            break
        b = b.left_mul_d(i)
    return b


def multiply(a: NilHeckeElement, b: NilHeckeElement) -> NilHeckeElement:
    a._check(b)
    result = NilHeckeElement._raw({}, a.n)
    for x, f in a._terms.items():
        result = result + apply_d_word(x, b).left_mul_poly(f)
    return result


class BlockBudget:
    """
    Pruning rule for products whose final support is a single D_target.

    A term f D_x can still reach D_target only if x lies in the parabolic
    subgroup of the target and, on every connected block K, the length gap
    l(target_K) - l(x_K) is at most the number of K-letters still to be
    multiplied on the left.
    """

    def __init__(self, target: Permutation):
        self.target = target
        support = parabolic(set(some_reduced_word(target).letters), target.n)
        self.blocks = support.blocks()
        self.block_of = {i: k for k, block in enumerate(self.blocks) for i in block}
        self.target_lengths = [self.block_length(target, block) for block in self.blocks]
        self.position_block = {
            position: k
            for k, block in enumerate(self.blocks)
            for position in range(block[0], block[-1] + 2)
        }

    @staticmethod
    def block_length(x, block):
        lo, hi = block[0] - 1, block[-1] + 1
        images = x.images[lo:hi]
        return sum(1 for p in range(len(images)) for q in range(p + 1, len(images)) if images[p] > images[q])

    def contains(self, x):
        """x lies in the parabolic subgroup generated by the blocks."""
        in_block = self.position_block
        for position, value in enumerate(x.images, start=1):
            if position in in_block:
                if in_block.get(value) != in_block[position]:
                    return False
            elif value != position:
                return False
        return True

    def per_block(self, letters: Mapping):
        counts = [0] * len(self.blocks)
        for i, count in letters.items():
            k = self.block_of.get(i)
            if k is not None:
                counts[k] += count
        return counts

    def prune(self, element: NilHeckeElement, remaining: Mapping) -> NilHeckeElement:
        budget = self.per_block(remaining)
        kept = {}
        for x, f in element.items():
            if not self.contains(x):
                continue
            gaps = (
                target - self.block_length(x, block)
                for target, block in zip(self.target_lengths, self.blocks)
            )
            if all(gap <= allowed for gap, allowed in zip(gaps, budget)):
                kept[x] = f
        return NilHeckeElement._raw(kept, element.n)


def multiply_pruned(
    a: NilHeckeElement,
    b: NilHeckeElement,
    target: Permutation,
    budget: Optional[Mapping[int, int]] = None,
) -> NilHeckeElement:
    """
    a * b, dropping terms that cannot contribute to the D_target coefficient
    of the final product.

    budget counts, per generator index, the D-letters still to be multiplied
    on the left of a * b. With budget None the plain product is returned.
    """
    if budget is None:
        return multiply(a, b)
    a._check(b)
    rule = BlockBudget(target)
    result = NilHeckeElement._raw({}, a.n)
    for x, f in a._terms.items():
        letters = some_reduced_word(x).letters
        acc = b
        for position in range(len(letters) - 1, -1, -1):
            acc = acc.left_mul_d(letters[position])
            remaining = Counter(budget)
            remaining.update(letters[:position])
            acc = rule.prune(acc, remaining)
            if not acc:
                break
        result = result + acc.left_mul_poly(f)
    return rule.prune(result, budget)


def coefficient_of(e: NilHeckeElement, w: Permutation) -> IntPolynomial:
    return e._terms.get(w, IntPolynomial._raw({}, e.n))


def act_on_poly(e: NilHeckeElement, p: IntPolynomial) -> IntPolynomial:
    """The module action D_i -> d_i, f -> (f *) of NH on R."""
    if e.n != p.n:
        raise InvalidInputError(f"Rank mismatch: NH_{e.n} acting on {p.n} variables")
    result = IntPolynomial._raw({}, p.n)
    for x, f in e._terms.items():
        result = result + f * demazure(x, p)
    return result


def block_product(items: Iterable, tail: Optional[NilHeckeElement] = None, n: int = None) -> NilHeckeElement:
    """
    The product (D_{x_m} z_m) ... (D_{x_1} z_1) * tail.

    items lists (x_i, z_i) innermost first; tail defaults to the unit.
    """
    items = list(items)
    if n is None:
        n = items[0][0].n if items else tail.n
    acc = tail if tail is not None else unit(n)
    for x, zeta in items:
        acc = apply_d_word(x, acc.left_mul_poly(zeta))
    return acc

