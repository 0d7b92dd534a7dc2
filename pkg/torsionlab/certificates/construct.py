"""
Torsion certificates from operator words.

Given data (w_i, a_i, b_i) in S_n with sum l(w_i) = a + b, this module builds
the reduced expression in S_N, N = a + n + b, whose intersection form at
w_I (I = {1, ..., N-1} minus {a, a+n}) is the 1x1 matrix (+-C), where C is
the operator word value. The entry is computed twice, once by acting with
the W_M-block product on 1 and once by multiplying out the nil Hecke
product E literally, and the two must agree.
"""

import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import List, NamedTuple, Optional

from torsionlab.algebra.nilhecke import (
    act_on_poly,
    block_product,
    coefficient_of,
    d_of,
    multiply,
    multiply_pruned,
    unit,
)
from torsionlab.algebra.poly import check_degree_condition, constant, operator_word_value, root, variable
from torsionlab.algebra.sym import (
    Permutation,
    Word,
    bruhat_leq_images,
    compose,
    from_letters,
    identity,
    is_reduced,
    length,
    longest_element,
    min_coset_rep,
    parabolic,
    some_reduced_word,
)
from torsionlab.core import settings
from torsionlab.core.errors import IntegrityError, InvalidInputError, ResourceCapError, VanishingOperatorError
from torsionlab.core.serialization import int_from_json, int_to_json
from torsionlab.search.factor import Factorization, factorize


logger = logging.getLogger(__name__)


class DataItem(NamedTuple):
    w: Permutation
    a: int
    b: int


@dataclass(frozen=True)
class OperatorData:
    """Operator word data in S_n; items are listed innermost first."""

    n: int
    items: tuple = ()

    def __post_init__(self):
        if self.n < 2:
            raise InvalidInputError(f"Inner rank must be at least 2, got {self.n}")
        items = []
        for item in self.items:
            w, a, b = item
            if not isinstance(w, Permutation):
                w = Permutation(tuple(w))
            if w.n != self.n:
                raise InvalidInputError(f"Permutation {w} is not in S_{self.n}")
            if a < 0 or b < 0:
                raise InvalidInputError(f"Exponents must be nonnegative, got a={a}, b={b}")
            items.append(DataItem(w, int(a), int(b)))
        object.__setattr__(self, "items", tuple(items))

    @property
    def m(self):
        return len(self.items)

    @property
    def a(self):
        return sum(item.a for item in self.items)

    @property
    def b(self):
        return sum(item.b for item in self.items)

    @property
    def N(self):
        return self.a + self.n + self.b

    def total_length(self):
        return sum(length(item.w) for item in self.items)

    def check_degree(self):
        check_degree_condition(self.items)

    def value(self):
        """The operator word value C."""
        return operator_word_value(self.n, self.items)

    def to_json(self):
        return {
            "n": self.n,
            "items": [{"w": item.w.to_json(), "a": item.a, "b": item.b} for item in self.items],
        }

    @classmethod
    def from_json(cls, data):
        try:
            n = int_from_json(data["n"])
            items = [
                (Permutation.from_json(item["w"]), int_from_json(item["a"]), int_from_json(item["b"]))
                for item in data["items"]
            ]
        except (KeyError, TypeError) as e:
            raise InvalidInputError(f"Malformed operator data, expected {{n, items: [{{w, a, b}}]}}: {e}") from e
        return cls(n, tuple(items))


@dataclass(frozen=True)
class Layout:
    """Index sets of the embedding S_n -> S_N shifted by a."""

    a: int
    n: int
    b: int

    @property
    def N(self):
        return self.a + self.n + self.b

    @property
    def A(self):
        return parabolic(range(1, self.a), self.N)

    @property
    def M(self):
        return parabolic(range(self.a + 1, self.a + self.n), self.N)

    @property
    def B(self):
        return parabolic(range(self.a + self.n + 1, self.N), self.N)

    @property
    def I(self):
        return parabolic(set(range(1, self.N)) - {self.a, self.a + self.n}, self.N)

    def w_I(self):
        return longest_element(self.I, self.N)

    def w_M(self):
        return longest_element(self.M, self.N)


def layout_of(data: OperatorData) -> Layout:
    return Layout(data.a, data.n, data.b)


def inner_mprime(n: int):
    """M' inside S_n: the generators 2, ..., n-2 (M without its two extreme generators)."""
    return parabolic(range(2, n - 1), n)


def normalize(data: OperatorData, split: bool = False) -> OperatorData:
    """
    Replace each w_i by its minimal representative in w_i W_{M'}.

    d_u for u in W_{M'} commutes with multiplication by x_1 and x_n, so the
    residue u of w_i = w_i' u moves inward onto w_{i-1} as u w_{i-1}. If the
    lengths fail to add, or a residue reaches the innermost item, C = 0.

    With split=True every item with a_i, b_i > 0 becomes the pair
    (id, 0, b_i), (w_i, a_i, 0).
    """
    data.check_degree()
    Mp = inner_mprime(data.n)
    items = list(data.items)
    carry = identity(data.n)
    for idx in range(len(items) - 1, -1, -1):
        item = items[idx]
        w = compose(carry, item.w)
        if length(w) != length(carry) + length(item.w):
            raise VanishingOperatorError(f"Residue {carry} does not extend w_{idx + 1} = {item.w}; the operator word is zero")
        rep = min_coset_rep(w, Mp)
        carry = compose(rep.inverse(), w)
        items[idx] = DataItem(rep, item.a, item.b)
    if not carry.is_identity():
        raise VanishingOperatorError(f"Residue {carry} reaches the innermost item; the operator word is zero")
    if split:
        expanded = []
        for item in items:
            if item.a and item.b:
                expanded.append(DataItem(identity(data.n), 0, item.b))
                expanded.append(DataItem(item.w, item.a, 0))
            else:
                expanded.append(item)
        items = expanded
    return OperatorData(data.n, tuple(items))


class Segment(NamedTuple):
    """A run of consecutive letters of the constructed word."""

    kind: str  # "w" (a shifted w_i), "u", "v" or "wM"
    item: int  # 1-based item index, 0 for w_M
    letters: tuple


def expression_segments(data: OperatorData) -> List[Segment]:
    """The word w_m u_m v_m ... w_1 u_1 v_1 w_M, cut into its runs."""
    lay = layout_of(data)
    segments = []
    prefix_a = [0]
    prefix_b = [0]
    for item in data.items:
        prefix_a.append(prefix_a[-1] + item.a)
        prefix_b.append(prefix_b[-1] + item.b)
    for i in range(data.m, 0, -1):
        item = data.items[i - 1]
        letters = tuple(k + lay.a for k in some_reduced_word(item.w).letters)
        segments.append(Segment("w", i, letters))
        # subscripts fall by one inside each run; s_a occurs a_i times
        for run in range(prefix_a[i], prefix_a[i - 1], -1):
            segments.append(Segment("u", i, tuple(range(lay.a, lay.a - run, -1))))
        # subscripts rise by one inside each run; s_{a+n} occurs b_i times
        for run in range(prefix_b[i], prefix_b[i - 1], -1):
            start = lay.a + lay.n
            segments.append(Segment("v", i, tuple(range(start, start + run))))
    segments.append(Segment("wM", 0, some_reduced_word(lay.w_M()).letters))
    return segments


def build_expression(data: OperatorData) -> Word:
    lay = layout_of(data)
    letters = tuple(k for segment in expression_segments(data) for k in segment.letters)
    word = Word(letters, lay.N)
    if not is_reduced(word):
        raise IntegrityError(f"Constructed expression of length {len(word)} in S_{lay.N} is not reduced")
    return word


@dataclass(frozen=True)
class Subexpression:
    """A 0/1 choice along a word with its U/D decorations, read right to left."""

    word: Word
    bits: tuple
    decorations: tuple
    end: Permutation

    @property
    def defect(self):
        labels = self.labels()
        return labels.count("U0") - labels.count("D0")

    def labels(self):
        return [f"{d}{e}" for d, e in zip(self.decorations, self.bits)]

    def to_json(self):
        return {"bits": list(self.bits), "labels": self.labels(), "end": self.end.to_json(), "defect": self.defect}


def decorate(word: Word, bits) -> Subexpression:
    """
    Decorations of a subexpression: x_0 = id and, from the right, d_j = U if
    l(s_{i_j} x) > l(x) else D, then x <- s_{i_j}^{e_j} x.
    """
    bits = tuple(int(e) for e in bits)
    if len(bits) != len(word):
        raise InvalidInputError(f"{len(bits)} bits for a word of length {len(word)}")
    x = identity(word.n)
    decorations = [None] * len(word)
    for j in range(len(word) - 1, -1, -1):
        i = word.letters[j]
        decorations[j] = "D" if x.has_left_descent(i) else "U"
        if bits[j]:
            x = x.left_mul_simple(i)
    return Subexpression(word, bits, tuple(decorations), x)


def defect(word: Word, bits) -> int:
    return decorate(word, bits).defect


def closed_form_bits(data: OperatorData) -> tuple:
    """1 on w_M, 0 on each w_i, and (0, 1, ..., 1) on every u and v run."""
    bits = []
    for segment in expression_segments(data):
        if segment.kind == "wM":
            bits.extend([1] * len(segment.letters))
        elif segment.kind == "w":
            bits.extend([0] * len(segment.letters))
        else:
            bits.extend([0] + [1] * (len(segment.letters) - 1))
    return tuple(bits)


def defect_zero_subexpression(data: OperatorData, word: Optional[Word] = None) -> Subexpression:
    lay = layout_of(data)
    word = build_expression(data) if word is None else word
    sub = decorate(word, closed_form_bits(data))
    if sub.end != lay.w_I():
        raise IntegrityError(f"Closed-form subexpression evaluates to {sub.end}, expected w_I = {lay.w_I()}")
    if sub.defect != 0:
        raise IntegrityError(f"Closed-form subexpression has defect {sub.defect}")
    return sub


def enumerate_subexpressions(word: Word, target: Permutation, defect_value: Optional[int] = None) -> List[Subexpression]:
    """
    Every subexpression of word evaluating to target (and of the given
    defect, if one is given), by depth-first search from the right.

    Subexpressions of a prefix reach exactly the Bruhat interval below its
    Demazure product, so a branch is cut as soon as the element still
    needed from the prefix leaves that interval.
    """
    n = word.n
    letters = word.letters
    target_images = target.images
    target_length = length(target)
    found = []
    bits = [0] * len(letters)
    ceilings = []
    ceiling = identity(n)
    for i in letters:
        if not ceiling.has_right_descent(i):
            ceiling = ceiling.right_mul_simple(i)
        ceilings.append(ceiling.images)

    def visit(j, images, positions, ell, dft):
        remaining = j + 1
        if abs(ell - target_length) > remaining:
            return
        if defect_value is not None and abs(dft - defect_value) > remaining:
            return
        # positions holds the inverse of the suffix product
        if j >= 0 and not bruhat_leq_images(tuple(target_images[p - 1] for p in positions), ceilings[j]):
            return
        if j < 0:
            if images == target_images and (defect_value is None or dft == defect_value):
                found.append(tuple(bits))
            return
        i = letters[j]
        up = positions[i - 1] < positions[i]
        # e_j = 0
        bits[j] = 0
        visit(j - 1, images, positions, ell, dft + (1 if up else -1))
        # e_j = 1: swap the values i and i+1
        bits[j] = 1
        new_images = tuple(i + 1 if k == i else i if k == i + 1 else k for k in images)
        new_positions = list(positions)
        new_positions[i - 1], new_positions[i] = positions[i], positions[i - 1]
        visit(j - 1, new_images, new_positions, ell + (1 if up else -1), dft)
        bits[j] = 0

    visit(len(letters) - 1, tuple(range(1, n + 1)), list(range(1, n + 1)), 0, 0)
    return [decorate(word, b) for b in sorted(found)]


def nilhecke_factors(data: OperatorData):
    """
    The factors of E = E_m F_m G_m ... E_1 F_1 G_1 E_0, left to right.

    E_0 = D_{w_M}, E_i = D_{w_i} shifted; a u run of length L contributes
    alpha_a D_{a-1} ... D_{a-L+1} and a v run contributes
    alpha_{a+n} D_{a+n+1} ... D_{a+n+L-1}.
    """
    lay = layout_of(data)
    N = lay.N
    factors = []
    for segment in expression_segments(data):
        if segment.kind in ("w", "wM"):
            factors.append(d_of(from_letters(segment.letters, N)))
        else:
            head, rest = segment.letters[0], segment.letters[1:]
            factors.append(d_of(from_letters(rest, N)).left_mul_poly(root(head, N)))
    return factors


def _letter_counts(factor):
    counts = Counter()
    for x, _ in factor.items():
        counts.update(some_reduced_word(x).letters)
    return counts


def evaluate_nilhecke(data: OperatorData, pruned: Optional[bool] = None) -> int:
    """
    Coefficient of D_{w_I} in the literal product E.

    Ranks up to NILHECKE_MAX_RANK run unpruned (and check that E is a
    multiple of D_{w_I}); up to NILHECKE_PRUNED_MAX_RANK the product keeps
    only terms that can still reach D_{w_I}.
    """
    lay = layout_of(data)
    N = lay.N
    if pruned is None:
        pruned = N > settings.NILHECKE_MAX_RANK
    cap = settings.NILHECKE_PRUNED_MAX_RANK if pruned else settings.NILHECKE_MAX_RANK
    if N > cap:
        raise ResourceCapError(f"Nil Hecke evaluation at rank {N} exceeds the cap {cap}")
    target = lay.w_I()
    factors = nilhecke_factors(data)
    counts = [_letter_counts(f) for f in factors]
    logger.debug(f"Multiplying {len(factors)} nil Hecke factors in rank {N} (pruned={pruned})")
    acc = unit(N)
    for k in range(len(factors) - 1, -1, -1):
        if pruned:
            budget = Counter()
            for c in counts[:k]:
                budget.update(c)
            acc = multiply_pruned(factors[k], acc, target, budget)
        else:
            acc = multiply(factors[k], acc)
        if not acc:
            return 0
    if not pruned and any(x != target for x, _ in acc.items()):
        raise IntegrityError(f"E is not a multiple of D_{{w_I}}: support {[str(x) for x in acc.support()]}")
    return coefficient_of(acc, target).constant_value()


def evaluate_structured(data: OperatorData, expand_block: bool = False) -> int:
    """
    The D_{w_I} coefficient of E via the W_M-block reduction.

    E = D_{w_A w_B} (D_{w_m} z_m) ... (D_{w_1} z_1) D_{w_M} with
    z_i = (-x_1)^{a_i} x_n^{b_i} in the coordinates of M, and the block
    product equals K * D_{w_M} where K is its action on 1. The result is
    (-1)^a C. With expand_block=True the block product is also multiplied out
    in the nil Hecke ring and its D_{w_M} coefficient compared.
    """
    n = data.n
    first, last = variable(1, n), variable(n, n)
    zetas = [(-first) ** item.a * last ** item.b for item in data.items]
    f = constant(1, n)
    for item, zeta in zip(data.items, zetas):
        f = act_on_poly(d_of(item.w), zeta * f)
        if not f:
            break
    value = f.constant_value() if f else 0
    if expand_block:
        w0 = longest_element(parabolic(range(1, n), n), n)
        block = block_product([(item.w, zeta) for item, zeta in zip(data.items, zetas)], tail=d_of(w0), n=n)
        stray = [str(x) for x, _ in block.items() if x != w0]
        if stray:
            raise IntegrityError(f"Block product is not a multiple of D_{{w_M}}: stray terms at {stray}")
        expanded = coefficient_of(block, w0).constant_value()
        if expanded != value:
            raise IntegrityError(f"Block product coefficient {expanded} != action on 1 {value}")
    return value


@dataclass(frozen=True)
class TorsionCertificate:
    """A reduced expression in S_N whose intersection form at w_I is (value)."""

    data: OperatorData
    N: int
    word: Word
    x: Permutation
    value: int
    factorization: Factorization
    bits: tuple = ()
    evaluators: tuple = field(default=("structured",))

    @property
    def primes(self):
        return self.factorization.primes

    def to_json(self):
        return {
            "data": self.data.to_json(),
            "N": self.N,
            "word": self.word.to_json(),
            "word_length": len(self.word),
            "x": self.x.to_json(),
            "value": int_to_json(self.value),
            "defect_zero_bits": list(self.bits),
            "evaluators": list(self.evaluators),
            **self.factorization.to_json(),
        }


def certify(data: OperatorData, check_nilhecke: Optional[bool] = None, split: bool = False) -> TorsionCertificate:
    """
    Certify the operator word value C as the intersection form entry (+-C).

    check_nilhecke=None runs the literal nil Hecke evaluator only when the
    rank is within the unpruned cap; True forces it (pruned above that cap).
    """
    C = data.value()
    if C == 0:
        raise VanishingOperatorError("The operator word value is 0; there is no torsion to certify")
    normalized = normalize(data, split=split)
    lay = layout_of(normalized)
    word = build_expression(normalized)
    sub = defect_zero_subexpression(normalized, word)
    value = evaluate_structured(normalized)
    expected = (-1) ** normalized.a * C
    if value != expected:
        logger.error(f"Structured value {value} disagrees with (-1)^a C = {expected}")
        raise IntegrityError(f"Structured evaluation {value} != (-1)^a C = {expected}")
    evaluators = ["structured", "operator_word"]
    if check_nilhecke is None:
        check_nilhecke = lay.N <= settings.NILHECKE_MAX_RANK
    if check_nilhecke:
        literal = evaluate_nilhecke(normalized)
        if literal != value:
            logger.error(f"Nil Hecke value {literal} disagrees with structured value {value}")
            raise IntegrityError(f"Nil Hecke evaluation {literal} != structured evaluation {value}")
        evaluators.append("nilhecke")
    logger.info(f"Certified value {value} at rank N={lay.N} (word length {len(word)})")
    return TorsionCertificate(
        data=normalized,
        N=lay.N,
        word=word,
        x=lay.w_I(),
        value=value,
        factorization=factorize(value),
        bits=sub.bits,
        evaluators=tuple(evaluators),
    )
