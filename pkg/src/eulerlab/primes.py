"""Prime tables, 1-based prime indexing, residue subsequences and Moebius."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .core import BaseSequence, check_budget
from .errors import DomainError

DEFAULT_SEGMENT = 1 << 21


@dataclass(frozen=True)
class SubseqLabel:
    """Node (i, j) of the splitting tree: prime indices 2**i * n + j, n >= 1."""

    i: int
    j: int

    def __post_init__(self):
        if self.i < 0 or self.j < 0:
            raise ValueError("labels are non-negative")
        if self.j >= 2**self.i:
            raise ValueError(f"residue j={self.j} must be < 2**i = {2**self.i}")

    @property
    def stride(self) -> int:
        return 2**self.i

    def index(self, n: int) -> int:
        return self.stride * n + self.j

    def __str__(self) -> str:
        return f"({self.i},{self.j})"


ROOT = SubseqLabel(0, 0)


@dataclass(frozen=True)
class PrimeTable:
    limit: int
    primes: np.ndarray

    @property
    def count(self) -> int:
        return int(self.primes.size)

    def __len__(self) -> int:
        return self.count

    def sequence(self, count: int | None = None) -> BaseSequence:
        arr = self.primes if count is None else self.primes[:count]
        return BaseSequence(arr, "primes", finite=False, prime_density=1.0)


def _small_primes(n: int) -> np.ndarray:
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    flags = np.ones(n + 1, dtype=bool)
    flags[:2] = False
    flags[4::2] = False
    for p in range(3, math.isqrt(n) + 1, 2):
        if flags[p]:
            flags[p * p :: 2 * p] = False
    return np.flatnonzero(flags).astype(np.int64)


def iter_prime_segments(limit: int, segment: int = DEFAULT_SEGMENT) -> Iterator[np.ndarray]:
    """Yield the primes <= limit in increasing order, one segment at a time.

    Odd-only segmented sieve of Eratosthenes; memory is O(sqrt(limit) + segment).
    """
    if limit < 2:
        return
    if limit < 9:
        yield _small_primes(limit)
        return
    root = math.isqrt(limit)
    base = _small_primes(root)
    yield base
    odd_base = base[1:]
    lo = root + 1
    if lo % 2 == 0:
        lo += 1
    span = 2 * segment
    while lo <= limit:
        hi = min(lo + span, limit + 1)
        flags = np.ones((hi - lo + 1) // 2, dtype=bool)  # flags[k] <-> lo + 2k
        for p in odd_base:
            p = int(p)
            start = max(p * p, -(-lo // p) * p)
            if start % 2 == 0:
                start += p
            if start >= hi:
                continue
            flags[(start - lo) // 2 :: p] = False
        found = lo + 2 * np.flatnonzero(flags).astype(np.int64)
        yield found[found <= limit]
        lo = hi if hi % 2 == 1 else hi + 1


def sieve(limit: int, segment: int = DEFAULT_SEGMENT) -> PrimeTable:
    """All primes <= limit.  Raises ResourceLimitError past the memory budget."""
    if limit < 0:
        raise ValueError("limit must be non-negative")
    estimate = 0 if limit < 2 else int(1.3 * limit / math.log(limit)) + 16
    check_budget(2 * 8 * estimate + segment, f"sieve({limit})")
    parts = list(iter_prime_segments(limit, segment))
    primes = np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)
    primes.setflags(write=False)
    return PrimeTable(limit, primes)


def nth_prime(table: PrimeTable, n: int) -> int:
    """p_n with p_1 = 2."""
    if n < 1 or n > table.count:
        raise IndexError(f"prime index {n} outside 1..{table.count} (limit {table.limit})")
    return int(table.primes[n - 1])


def residue_subsequence(
    table: PrimeTable, label: SubseqLabel, count: int | None = None
) -> BaseSequence:
    """(p_{2^i*1+j}, p_{2^i*2+j}, ...) truncated to ``count`` elements.

    ``count=None`` takes every element the table can serve.
    """
    available = (table.count - label.j) // label.stride if table.count >= label.stride + label.j else 0
    if count is None:
        count = available
    elif count > available:
        raise IndexError(
            f"label {label} needs prime index {label.index(count)}, table has {table.count}"
        )
    idx = label.stride * np.arange(1, count + 1, dtype=np.int64) + label.j - 1
    return BaseSequence(
        table.primes[idx], f"residue{label}", finite=False, prime_density=1.0 / label.stride
    )


def mobius_range(n: int) -> np.ndarray:
    """mu(k) for k = 0..n (mu(0) reported as 0) by sieving over primes and prime squares."""
    mu = np.ones(n + 1, dtype=np.int8)
    if n >= 0:
        mu[0] = 0
    for p in _small_primes(n):
        p = int(p)
        mu[p::p] *= -1
        mu[p * p :: p * p] = 0
    return mu


def mobius(n: int, table: PrimeTable | None = None) -> int:
    """Moebius function by trial division (table primes first when given)."""
    if n < 1:
        raise DomainError("mobius is defined for n >= 1")
    result = 1
    m = n
    candidates = table.primes if table is not None else ()
    for p in candidates:
        p = int(p)
        if p * p > m:
            break
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            result = -result
    else:
        d = int(candidates[-1]) + 1 if len(candidates) else 2
        if d > 3 and d % 2 == 0:
            d += 1
        while d * d <= m:
            if m % d == 0:
                m //= d
                if m % d == 0:
                    return 0
                result = -result
            d += 1 if d == 2 else 2
    if m > 1:
        result = -result
    return result
