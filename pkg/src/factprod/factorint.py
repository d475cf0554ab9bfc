"""Exact prime-side arithmetic.

Prime sieves, Legendre exponents of factorials, radicals and largest prime
factors, products of consecutive integers, and the Chebyshev/Mertens prefix
sums used by the inequality audits.  Everything here is pure and immutable
after construction, so values can be shared freely across worker threads.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass

import numpy as np

DEFAULT_SIEVE_LIMIT = 1_000_000

# Desk-scale ceiling for on-demand sieve growth; anything beyond this is a
# misuse of the toolkit, not a workload it should silently attempt.
SIEVE_CEILING = 200_000_000


def _sieve_flags(limit: int) -> np.ndarray:
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return flags


class PrimeTable:
    """All primes up to ``limit``, from a boolean Eratosthenes sieve.

    Instances are immutable; ``extended`` returns a new, larger table rather
    than mutating in place, so a shared table is safe for concurrent readers.
    """

    __slots__ = ("limit", "flags", "primes")

    def __init__(self, limit: int = DEFAULT_SIEVE_LIMIT) -> None:
        limit = int(limit)
        if limit > SIEVE_CEILING:
            raise ValueError(f"sieve limit {limit} exceeds ceiling {SIEVE_CEILING}")
        self.limit = max(limit, 2)
        self.flags = _sieve_flags(self.limit)
        self.flags.setflags(write=False)
        self.primes = np.flatnonzero(self.flags).astype(np.int64)
        self.primes.setflags(write=False)

    def extended(self, limit: int) -> "PrimeTable":
        return self if limit <= self.limit else PrimeTable(limit)

    def is_prime(self, n: int) -> bool:
        if n < 2:
            return False
        if n <= self.limit:
            return bool(self.flags[n])
        root = math.isqrt(n)
        tbl = self if root <= self.limit else PrimeTable(root)
        for p in tbl.primes:
            p = int(p)
            if p > root:
                break
            if n % p == 0:
                return False
        return True

    def primes_upto(self, x: float) -> np.ndarray:
        """Increasing array of all primes <= x (requires x <= limit)."""
        if x > self.limit:
            raise ValueError(f"primes_upto({x}) beyond table limit {self.limit}")
        hi = int(np.searchsorted(self.primes, math.floor(x), side="right"))
        return self.primes[:hi]

    def __repr__(self) -> str:  # pragma: no cover
        return f"PrimeTable(limit={self.limit}, count={len(self.primes)})"


_table_lock = threading.Lock()
_shared_table: PrimeTable | None = None


def table(min_limit: int = 0) -> PrimeTable:
    """Shared prime table, grown on demand (a new table replaces the old)."""
    global _shared_table
    t = _shared_table
    if t is not None and t.limit >= min_limit:
        return t
    with _table_lock:
        if _shared_table is None or _shared_table.limit < min_limit:
            _shared_table = PrimeTable(max(min_limit, DEFAULT_SIEVE_LIMIT))
        return _shared_table


def is_prime(n: int) -> bool:
    return table().is_prime(n)


def factorize(n: int) -> list[tuple[int, int]]:
    """(prime, exponent) pairs of n >= 1 by trial division over sieved primes."""
    if n < 1:
        raise ValueError("factorize requires n >= 1")
    out: list[tuple[int, int]] = []
    m = n
    if m == 1:
        return out
    tbl = table()
    root = math.isqrt(m)
    if root > tbl.limit:
        tbl = table(root)
    for p in tbl.primes:
        p = int(p)
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
    if m > 1:
        out.append((m, 1))
    return out


@dataclass(frozen=True, slots=True)
class ExpVec:
    """Signed sparse prime -> exponent vector in canonical form.

    ``entries`` holds (prime, exponent) pairs with primes strictly increasing
    and no zero exponents, so equality is structural and the zero test is
    O(1).  Addition and subtraction re-canonicalize.
    """

    entries: tuple[tuple[int, int], ...] = ()

    @classmethod
    def from_items(cls, items) -> "ExpVec":
        """Canonicalize arbitrary (prime, exponent) pairs; rejects non-primes."""
        acc: dict[int, int] = {}
        for p, e in items:
            acc[p] = acc.get(p, 0) + e
        out = []
        for p in sorted(acc):
            e = acc[p]
            if e == 0:
                continue
            if not is_prime(int(p)):
                raise ValueError(f"{p} is not prime")
            out.append((int(p), int(e)))
        return cls(tuple(out))

    @classmethod
    def of_int(cls, n: int) -> "ExpVec":
        """Exponent vector of an integer n >= 1 (trial division)."""
        return cls(tuple(factorize(n)))

    def exponent(self, p: int) -> int:
        for q, e in self.entries:
            if q == p:
                return e
            if q > p:
                break
        return 0

    def as_dict(self) -> dict[int, int]:
        return dict(self.entries)

    def is_zero(self) -> bool:
        return not self.entries

    def max_prime(self) -> int | None:
        return self.entries[-1][0] if self.entries else None

    def value(self) -> int:
        """The represented integer; requires all exponents nonnegative."""
        if any(e < 0 for _, e in self.entries):
            raise ValueError("negative exponent: no integer value")
        return math.prod(p**e for p, e in self.entries)

    def _merged(self, other: "ExpVec", sign: int) -> "ExpVec":
        a, b = self.entries, other.entries
        out: list[tuple[int, int]] = []
        i = j = 0
        while i < len(a) and j < len(b):
            pa, ea = a[i]
            pb, eb = b[j]
            if pa < pb:
                out.append((pa, ea))
                i += 1
            elif pb < pa:
                out.append((pb, sign * eb))
                j += 1
            else:
                e = ea + sign * eb
                if e:
                    out.append((pa, e))
                i += 1
                j += 1
        out.extend(a[i:])
        for p, e in b[j:]:
            out.append((p, sign * e))
        return ExpVec(tuple(out))

    def __add__(self, other: "ExpVec") -> "ExpVec":
        return self._merged(other, 1)

    def __sub__(self, other: "ExpVec") -> "ExpVec":
        return self._merged(other, -1)

    def __neg__(self) -> "ExpVec":
        return ExpVec(tuple((p, -e) for p, e in self.entries))

    def __str__(self) -> str:
        if not self.entries:
            return "1"
        return "*".join(f"{p}^{e}" if e != 1 else str(p) for p, e in self.entries)


def _legendre(n: int, p: int) -> int:
    total = 0
    q = p
    while q <= n:
        total += n // q
        q *= p
    return total


def vp_factorial(n: int, p: int) -> int:
    """Exponent of prime p in n!: sum of floor(n / p^e) over e >= 1."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if p < 2 or not is_prime(p):
        raise ValueError(f"p = {p} is not prime")
    return _legendre(n, p)


_fact_lock = threading.Lock()
_fact_cache: dict[int, ExpVec] = {0: ExpVec(), 1: ExpVec()}


def factorial_expvec(n: int) -> ExpVec:
    """Exponent vector of n! over all primes <= n (Legendre's formula).

    Results are memoized for the lifetime of the process; the cache is the
    dominant saving in the census search.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    v = _fact_cache.get(n)
    if v is not None:
        return v
    tbl = table(max(n, 2))
    v = ExpVec(tuple((int(p), _legendre(n, int(p))) for p in tbl.primes_upto(n)))
    with _fact_lock:
        _fact_cache[n] = v
    return v


def radical(a: int) -> int:
    """Product of the distinct primes dividing a; radical(1) = 1."""
    if a < 1:
        raise ValueError("radical requires a >= 1")
    return math.prod(p for p, _ in factorize(a))


def largest_prime_factor(n: int) -> int:
    """Greatest prime dividing n, with the convention P(1) = 1."""
    if n < 1:
        raise ValueError("largest_prime_factor requires n >= 1")
    f = factorize(n)
    return f[-1][0] if f else 1


def delta(m: int, k: int) -> tuple[int, ExpVec]:
    """m(m+1)...(m+k-1) as (big integer, exponent vector).

    The vector is built by factoring each term, independently of
    factorial_expvec, so the identity delta(m,k) = (m+k-1)!/(m-1)! is a
    testable cross-check rather than a definition.
    """
    if m < 1 or k < 1:
        raise ValueError("delta requires m >= 1 and k >= 1")
    value = 1
    acc: dict[int, int] = {}
    for term in range(m, m + k):
        value *= term
        for p, e in factorize(term):
            acc[p] = acc.get(p, 0) + e
    vec = ExpVec(tuple((p, acc[p]) for p in sorted(acc)))
    return value, vec


def theta(nu: float) -> float:
    """Chebyshev theta: sum of log p over primes p <= nu (natural log)."""
    if nu < 1:
        raise ValueError("theta requires nu >= 1")
    if nu < 2:
        return 0.0
    ps = table(int(nu) + 1).primes_upto(nu)
    return float(math.fsum(np.log(ps.astype(np.float64))))


def mertens_log_sum(nu: float) -> float:
    """Sum of (log p)/p over primes p <= nu."""
    if nu < 1:
        raise ValueError("mertens_log_sum requires nu >= 1")
    if nu < 2:
        return 0.0
    ps = table(int(nu) + 1).primes_upto(nu).astype(np.float64)
    return float(math.fsum(np.log(ps) / ps))


def radical_table(limit: int) -> np.ndarray:
    """rad[i] for 0 <= i <= limit by sieve; rad[0] = 0 and rad[1] = 1."""
    if limit < 1:
        raise ValueError("limit must be >= 1")
    rad = np.ones(limit + 1, dtype=np.int64)
    rad[0] = 0
    for p in table(limit).primes_upto(limit):
        p = int(p)
        rad[p::p] *= p
    return rad


def lpf_table(limit: int) -> np.ndarray:
    """Largest-prime-factor table for 0 <= i <= limit; entry 1 is 1."""
    if limit < 1:
        raise ValueError("limit must be >= 1")
    lpf = np.zeros(limit + 1, dtype=np.int64)
    lpf[1] = 1
    for p in table(limit).primes_upto(limit):
        p = int(p)
        lpf[p::p] = p
    return lpf
