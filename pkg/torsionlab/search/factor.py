"""
Integer factorization for certified values.
"""

import logging
from dataclasses import dataclass
from typing import Optional

from sympy import factorint, isprime

from torsionlab.core import settings
from torsionlab.core.errors import InvalidInputError
from torsionlab.core.serialization import int_to_json


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Factorization:
    """Prime factors of |value| with multiplicity, plus an unfactored composite if effort ran out."""

    value: int
    primes: tuple
    remainder: Optional[int] = None

    @property
    def complete(self):
        return self.remainder is None

    def distinct(self):
        return sorted(set(self.primes))

    def largest_prime(self):
        return max(self.primes, default=None)

    def to_json(self):
        return {
            "primes": [int_to_json(p) for p in self.primes],
            "complete": self.complete,
            "composite_remainder": None if self.remainder is None else int_to_json(self.remainder),
        }


def factorize(value: int, full_bits: int = None, trial_limit: int = None) -> Factorization:
    """
    Factor |value|.

    Below 2**full_bits the factorization is complete. Above it sympy runs
    trial division up to trial_limit plus rho and p-1 rounds; any leftover
    composite is reported as the remainder.
    """
    if value == 0:
        raise InvalidInputError("Cannot factor 0")
    full_bits = settings.FACTOR_FULL_BITS if full_bits is None else full_bits
    trial_limit = settings.FACTOR_TRIAL_LIMIT if trial_limit is None else trial_limit
    m = abs(int(value))
    if m.bit_length() <= full_bits:
        found = factorint(m)
    else:
        found = factorint(m, limit=trial_limit)
    primes = []
    remainder = 1
    for factor, multiplicity in found.items():
        if isprime(factor):
            primes.extend([factor] * multiplicity)
        else:
            remainder *= factor ** multiplicity
    if remainder != 1:
        logger.warning(f"Factorization of a {m.bit_length()}-bit value left composite {remainder}")
    return Factorization(value=int(value), primes=tuple(sorted(primes)), remainder=None if remainder == 1 else remainder)


def largest_prime_factor(value: int) -> int:
    """Largest known prime factor of |value|; 1 for units and zero."""
    if value in (0, 1, -1):
        return 1
    return factorize(value).largest_prime() or 1
