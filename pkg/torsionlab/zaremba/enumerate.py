"""
Enumeration of Gamma_A top-left entries and the bridge to torsion certificates.

Right multiplication by a generator [[ab + 1, a], [b, 1]] sends the first row
(p, q) of gamma to (p + b q', q') with q' = p a + q. Every entry is positive,
so gamma_11 strictly increases along a word and the depth-first growth can
stop as soon as it exceeds the bound.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Set, Tuple

from joblib import Parallel, delayed
from sympy import GoldenRatio, Rational, floor, isprime, sieve, sqrt

from torsionlab.certificates.construct import TorsionCertificate, certify
from torsionlab.core import settings
from torsionlab.core.errors import IntegrityError, InvalidInputError, ResourceCapError
from torsionlab.core.serialization import int_to_json
from torsionlab.search.factor import factorize
from torsionlab.search.families import ulu_entry_sign, ulu_matrix, ulu_word_data

from .semigroup import IDENTITY, Mat2, SemigroupWord, gamma_a_generator, gamma_product, parse_gamma_word


logger = logging.getLogger(__name__)


def _check_bounds(A, N_max):
    if A < 1:
        raise InvalidInputError(f"A must be positive, got {A}")
    if N_max < 1:
        raise InvalidInputError(f"N_max must be positive, got {N_max}")


def _grow(A, N_max, roots) -> Set[int]:
    """Depth-first continuant growth from the given first rows."""
    found = set()
    stack = list(roots)
    while stack:
        p, q = stack.pop()
        for a in range(1, A + 1):
            q_next = p * a + q
            if p + q_next > N_max:
                break
            for b in range(1, A + 1):
                p_next = p + b * q_next
                if p_next > N_max:
                    break
                found.add(p_next)
                stack.append((p_next, q_next))
    return found


def _grow_from(A, N_max, generators) -> Set[int]:
    roots = []
    found = set()
    for a, b in generators:
        p = a * b + 1
        if p <= N_max:
            found.add(p)
            roots.append((p, a))
    return found | _grow(A, N_max, roots)


def representable_set(A: int, N_max: int, workers: Optional[int] = None) -> Set[int]:
    """
    All n <= N_max equal to gamma_11 for a nonempty word in Gamma_A.

    The top-level generator choices are split across workers and the
    partial sets are merged as a union.
    """
    _check_bounds(A, N_max)
    workers = workers or settings.DEFAULT_WORKERS
    generators = [(a, b) for a in range(1, A + 1) for b in range(1, A + 1)]
    chunks = [generators[k::workers] for k in range(workers)]
    parts = Parallel(n_jobs=workers)(delayed(_grow_from)(A, N_max, chunk) for chunk in chunks if chunk)
    result = set().union(*parts)
    logger.debug(f"Gamma_{A} represents {len(result)} values up to {N_max}")
    return result


def representable_set_bfs(A: int, N_max: int) -> Set[int]:
    """Breadth-first matrix products, one word length at a time."""
    _check_bounds(A, N_max)
    generators = [gamma_a_generator(a, b, A) for a in range(1, A + 1) for b in range(1, A + 1)]
    found = set()
    level = {IDENTITY}
    while level:
        next_level = set()
        for gamma in level:
            for g in generators:
                product = gamma * g
                if product.a11 > N_max:
                    continue
                if product.det() != 1:
                    raise IntegrityError(f"Semigroup element {product} has determinant {product.det()}")
                found.add(product.a11)
                next_level.add(product)
        level = next_level
    return found


def density(A: int, N: int, workers: Optional[int] = None) -> Fraction:
    return Fraction(len(representable_set(A, N, workers)), N)


def parse_theta(theta) -> Fraction:
    value = Fraction(theta) if not isinstance(theta, float) else Fraction(str(theta))
    if not 0 < value < 1:
        raise InvalidInputError(f"theta must lie strictly between 0 and 1, got {theta}")
    return value


@dataclass(frozen=True)
class PrimeReport:
    A: int
    theta: Fraction
    N: int
    primes: tuple

    @property
    def count(self):
        return len(self.primes)

    def to_json(self):
        return {
            "A": self.A,
            "theta": str(self.theta),
            "N": int_to_json(self.N),
            "count": self.count,
            "primes": [int_to_json(p) for p in self.primes],
        }


def prime_records(A: int, theta, N: int, workers: Optional[int] = None) -> PrimeReport:
    """Representable primes p with theta N < p <= N."""
    theta = parse_theta(theta)
    if N < 2:
        return PrimeReport(A, theta, N, ())
    values = representable_set(A, N, workers)
    low = int(theta * N)
    primes = tuple(p for p in sieve.primerange(low + 1, N + 1) if p in values)
    logger.info(f"{len(primes)} representable primes in ({theta} * {N}, {N}] for A={A}")
    return PrimeReport(A, theta, N, primes)


@dataclass(frozen=True)
class GrowthParameters:
    """phi, d = phi / sqrt(5), c = phi^(1/A), N = d phi^(L/A) and the threshold a c^L = theta N."""

    L: int
    A: int
    theta: Fraction
    phi: float
    d: float
    c: float
    N: float
    N_floor: int
    threshold_floor: int

    @property
    def max_word_length(self):
        return self.L // (2 * self.A)

    def to_json(self):
        return {
            "L": self.L,
            "A": self.A,
            "theta": str(self.theta),
            "phi": self.phi,
            "d": self.d,
            "c": self.c,
            "N": self.N,
            "N_floor": int_to_json(self.N_floor),
            "threshold_floor": int_to_json(self.threshold_floor),
        }


def growth_parameters(L: int, A: Optional[int] = None, theta=None) -> GrowthParameters:
    A = A or settings.ZAREMBA_A
    theta = parse_theta(theta if theta is not None else settings.ZAREMBA_THETA)
    if L < 1:
        raise InvalidInputError(f"L must be positive, got {L}")
    d = GoldenRatio / sqrt(5)
    c = GoldenRatio ** Rational(1, A)
    N = d * GoldenRatio ** Rational(L, A)
    threshold = Rational(theta.numerator, theta.denominator) * N
    return GrowthParameters(
        L=L,
        A=A,
        theta=theta,
        phi=float(GoldenRatio),
        d=float(d),
        c=float(c),
        N=float(N),
        N_floor=int(floor(N)),
        threshold_floor=int(floor(threshold)),
    )


@dataclass(frozen=True)
class GrowthWitness:
    p: int
    word: SemigroupWord
    gamma_word: SemigroupWord
    matrix: Mat2
    parameters: GrowthParameters

    @property
    def length(self):
        return len(self.gamma_word)

    @property
    def torsion_rank(self):
        return 3 * self.length + 5

    def to_json(self):
        return {
            "p": int_to_json(self.p),
            "word": self.word.to_json(),
            "gamma_word": self.gamma_word.to_json(),
            "length": self.length,
            "torsion_rank": self.torsion_rank,
            "matrix": self.matrix.to_json(),
            "parameters": self.parameters.to_json(),
        }


def growth_witness(L: int, A: Optional[int] = None, theta=None) -> GrowthWitness:
    """
    A Gamma word of length <= L whose top-left entry is a prime above theta N.

    Gamma_A words with l_A <= L / (2A) are searched exhaustively for the
    largest prime gamma_11 in (theta N, N]; ties go to the shortest, then
    lexicographically smallest, word.
    """
    params = growth_parameters(L, A, theta)
    A = params.A
    if params.N_floor > settings.ZAREMBA_GROWTH_MAX_N:
        raise ResourceCapError(
            f"L={L} gives N={params.N_floor}, above the cap {settings.ZAREMBA_GROWTH_MAX_N}"
        )
    depth = params.max_word_length
    if depth < 1:
        raise ResourceCapError(f"L={L} admits no Gamma_{A} word of length >= 1")
    primes = set(sieve.primerange(params.threshold_floor + 1, params.N_floor + 1))
    best: Optional[Tuple] = None
    stack: List[Tuple[int, int, tuple]] = [(1, 0, ())]
    while stack:
        p, q, letters = stack.pop()
        if len(letters) == depth:
            continue
        for a in range(1, A + 1):
            q_next = p * a + q
            if p + q_next > params.N_floor:
                break
            for b in range(1, A + 1):
                p_next = p + b * q_next
                if p_next > params.N_floor:
                    break
                word = letters + ((a, b),)
                if p_next in primes:
                    key = (-p_next, len(word), word)
                    if best is None or key < best:
                        best = key
                stack.append((p_next, q_next, word))
    if best is None:
        raise ResourceCapError(
            f"No representable prime in ({params.threshold_floor}, {params.N_floor}] within l_A <= {depth}"
        )
    p = -best[0]
    word = SemigroupWord("gamma_A", best[2], A)
    matrix = word.product
    gamma_word = word.to_gamma()
    if matrix.a11 != p or gamma_product(gamma_word.letters) != matrix:
        raise IntegrityError(f"Witness word does not reproduce gamma_11 = {p}")
    if len(gamma_word) > L or not isprime(p):
        raise IntegrityError(f"Witness p={p} of length {len(gamma_word)} fails its checks")
    logger.info(f"Growth witness p={p} with Gamma length {len(gamma_word)} <= L={L}")
    return GrowthWitness(p, word, gamma_word, matrix, params)


@dataclass(frozen=True)
class BridgeReport:
    """One certificate per nonzero entry of the 2x2 product of a Gamma word."""

    word: str
    matrix: Mat2
    twist: int
    certificates: Dict[Tuple[int, int], TorsionCertificate]

    @property
    def N(self):
        return 3 * len(self.word) + 5

    def to_json(self):
        return {
            "word": self.word,
            "matrix": self.matrix.to_json(),
            "twist": self.twist,
            "N": self.N,
            "entries": [
                {"row": r, "column": c, "entry": int_to_json(self.matrix.entry(r, c)), "certificate": cert.to_json()}
                for (r, c), cert in sorted(self.certificates.items())
            ],
        }


def torsion_bridge(word, check_nilhecke: Optional[bool] = False) -> BridgeReport:
    """
    Certify every nonzero entry of the product of an {L, R} word.

    L becomes U_l and R becomes U_u = -[[1, 1], [0, 1]], so the operator
    matrix is (-1)^#R times the semigroup product. Every prime dividing an
    entry must divide the certified value at rank 3 l + 5.
    """
    letters = parse_gamma_word(word)
    if not letters:
        raise InvalidInputError("The torsion bridge needs a nonempty word")
    gamma = gamma_product(letters)
    ulu = "".join("U" if ch == "R" else "L" for ch in letters)
    twist = -1 if letters.count("R") % 2 else 1
    op_matrix = ulu_matrix(ulu)
    if Mat2.from_rows(op_matrix) != (gamma if twist == 1 else -gamma):
        raise IntegrityError(f"Operator matrix {op_matrix} is not (-1)^#R times {gamma}")
    certificates = {}
    for r in range(2):
        for c in range(2):
            entry = gamma.entry(r, c)
            if entry == 0:
                continue
            data = ulu_word_data(ulu, r, c)
            expected = ulu_entry_sign(c) * op_matrix[r][c]
            if data.value() != expected:
                raise IntegrityError(f"Entry ({r}, {c}): operator value {data.value()} != {expected}")
            cert = certify(data, check_nilhecke=check_nilhecke)
            for p in factorize(entry).distinct():
                if cert.value % p:
                    raise IntegrityError(f"Prime {p} of entry ({r}, {c}) does not divide {cert.value}")
            certificates[(r, c)] = cert
    logger.info(f"Bridged {''.join(letters)} with {len(certificates)} certificates at N={3 * len(letters) + 5}")
    return BridgeReport("".join(letters), gamma, twist, certificates)
