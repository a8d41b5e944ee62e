"""
Square-free integers: sieve, intensity factor f(q), coprime counts, the
truncated Z(k) sum over square-free generators and the R(k) diagnostic.
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
import sympy

from .conf import get_setting
from .exceptions import ConfigurationError, MemoryBudgetError, UnderResolvedError

logger = logging.getLogger(__name__)

K_DENOMINATOR_LIMIT = 10 ** 6
EXACT_SUM_LIMIT = 2 ** 10
CHUNK = 4096


@dataclass(frozen=True, eq=False)
class SquarefreeSieve:
    limit: int
    flags: np.ndarray
    spf: np.ndarray

    @property
    def squarefree(self):
        return np.flatnonzero(self.flags)

    def is_squarefree(self, n):
        n = abs(int(n))
        if n > self.limit:
            raise ConfigurationError(f"{n} is beyond the sieve limit {self.limit}")
        return bool(self.flags[n])

    def density(self):
        return np.count_nonzero(self.flags) / self.limit

    def first(self, S):
        values = self.squarefree
        if len(values) < S:
            raise ConfigurationError(f"sieve up to {self.limit} holds only {len(values)} square-free numbers")
        return values[:S]

    def primes_of(self, n):
        """Distinct primes of n via the smallest-prime-factor table."""
        primes = []
        while n > 1:
            p = int(self.spf[n])
            primes.append(p)
            while n % p == 0:
                n //= p
        return primes


def sieve(N):
    """Square-free flags and smallest prime factors up to N."""
    if N < 2:
        raise ConfigurationError(f"sieve limit must be >= 2, got {N}")
    budget = get_setting('SIEVE_LIMIT')
    if N > budget:
        raise MemoryBudgetError(f"sieve limit {N} exceeds the budget of {budget}")
    spf = np.zeros(N + 1, dtype=np.int64)
    flags = np.ones(N + 1, dtype=bool)
    flags[0] = False
    for p in range(2, math.isqrt(N) + 1):
        if spf[p] == 0:
            multiples = spf[p * p::p]
            multiples[multiples == 0] = p
            flags[p * p::p * p] = False
    unmarked = np.flatnonzero(spf == 0)
    spf[unmarked] = unmarked
    logger.debug("sieve to %d: %d square-free", N, np.count_nonzero(flags))
    return SquarefreeSieve(N, flags, spf)


def f_factor(q):
    """prod_{p|q} 1/(p**2 - 1) for cube-free q, else 0."""
    if q < 1:
        raise ConfigurationError(f"q must be >= 1, got {q}")
    factors = sympy.factorint(q)
    if any(e >= 3 for e in factors.values()):
        return Fraction(0)
    value = Fraction(1)
    for p in factors:
        value /= p * p - 1
    return value


def _mobius_divisors(primes):
    divisors, mobius = [1], [1]
    for p in primes:
        divisors += [d * p for d in divisors]
        mobius += [-m for m in mobius]
    return divisors, mobius


def coprime_count(x, q):
    """Number of 1 <= m <= x with gcd(m, q) = 1, by inclusion-exclusion."""
    if q < 1:
        raise ConfigurationError(f"q must be >= 1, got {q}")
    if x < 0:
        raise ConfigurationError(f"x must be >= 0, got {x}")
    x = Fraction(x)
    divisors, mobius = _mobius_divisors(list(sympy.factorint(q)))
    return sum(mu * math.floor(x / e) for e, mu in zip(divisors, mobius))


def cube_free_decomposition(q):
    """(s, d) with s square-free, d | s and q = s*d; q must be cube-free."""
    factors = sympy.factorint(q)
    if q < 1 or any(e >= 3 for e in factors.values()):
        raise ConfigurationError(f"{q} is not cube-free")
    s = math.prod(factors)
    return s, q // s


def _snap(k):
    k = Fraction(k).limit_denominator(K_DENOMINATOR_LIMIT)
    if not 0 < k < 1:
        raise ConfigurationError(f"k must lie in (0, 1), got {k}")
    return k


@lru_cache(maxsize=4)
def _generators(S):
    """First S square-free numbers with their prime sets."""
    N = max(16, int(S * math.pi ** 2 / 6 * 1.05) + 64)
    table = sieve(N)
    while len(table.squarefree) < S:
        N *= 2
        table = sieve(N)
    values = table.first(S)
    return tuple((int(s), tuple(table.primes_of(int(s)))) for s in values)


def _chunk_arrays(chunk):
    """Flattened (owner, q, e, mu) over s in chunk, d | s, e | s."""
    owner, q_values, e_values, mu_values = [], [], [], []
    for index, (s, primes) in enumerate(chunk):
        divisors, mobius = _mobius_divisors(primes)
        for d in divisors:
            owner.extend([index] * len(divisors))
            q_values.extend([s * d] * len(divisors))
            e_values.extend(divisors)
            mu_values.extend(mobius)
    return (np.array(owner, dtype=np.int64), np.array(q_values, dtype=np.int64),
            np.array(e_values, dtype=np.int64), np.array(mu_values, dtype=np.int64))


@lru_cache(maxsize=2)
def _triples(S):
    generators = _generators(S)
    return tuple(
        _chunk_arrays(generators[start:start + CHUNK])
        for start in range(0, len(generators), CHUNK)
    )


def generator_counts(k, S):
    """
    Per-generator peak counts sum_{d|s} coprime_count(s*d*k, s*d) for the
    first S square-free s.

    Returns:
        (generators, counts) with counts as Python integers
    """
    k = _snap(k)
    P, Q = k.numerator, k.denominator
    generators = _generators(S)
    counts = []
    for start, (owner, q, e, mu) in zip(range(0, len(generators), CHUNK), _triples(S)):
        size = len(generators[start:start + CHUNK])
        if q.size and int(q.max()) * max(P, Q * int(e.max())) > 2 ** 62:
            q, e, mu = q.astype(object), e.astype(object), mu.astype(object)
        floor = (q * P) // (Q * e)
        # only denominators with q*k >= 1 contribute
        contribution = np.where(q * P >= Q, mu * floor, 0).astype(np.int64)
        per_generator = np.zeros(size, dtype=np.int64)
        np.add.at(per_generator, owner, contribution)
        counts.extend(int(c) for c in per_generator)
    return generators, counts


def z_squarefree(k, S):
    """
    Truncated Z(k) for the square-free integers, normalised by I(0).

    Args:
        k: 0 < k < 1, snapped to a rational with denominator <= 10**6
        S: number of square-free generators

    Returns:
        Fraction for S <= 2**10, float otherwise
    """
    if S < 1:
        raise ConfigurationError(f"S must be >= 1, got {S}")
    generators, counts = generator_counts(k, S)
    if S <= EXACT_SUM_LIMIT:
        total = Fraction(0)
        for (s, primes), count in zip(generators, counts):
            if count:
                total += Fraction(count, math.prod(p * p - 1 for p in primes) ** 2)
        return total
    terms = [
        count / float(math.prod(p * p - 1 for p in primes)) ** 2
        for (s, primes), count in zip(generators, counts) if count
    ]
    return math.fsum(sorted(terms))


@dataclass(frozen=True)
class RPoint:
    k: float
    S: int
    Z: float
    R: float


def r_diagnostic(k_list, S):
    """
    R(k) = log Z(k) / log k per k. Truncation makes the estimates upper
    biased: larger S moves R down.
    """
    rows = []
    for k in k_list:
        value = float(z_squarefree(k, S))
        if value == 0:
            required = math.ceil(1 / float(k))
            raise UnderResolvedError(
                f"no square-free peak in (0, {float(k):g}] from the first {S} generators "
                f"(needs a denominator s*d >= {required}); increase S",
                required=required,
            )
        rows.append(RPoint(k=float(k), S=S, Z=value, R=math.log(value) / math.log(float(k))))
        logger.info("square-free R(%g) = %.6f at S = %d", k, rows[-1].R, S)
    return rows
