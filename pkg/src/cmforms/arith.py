"""Exact integer helpers: gcd/xgcd, prime sieves, factorization, divisors.

Everything here works on plain Python integers; nothing allocates global
mutable state except the small prime cache, which only grows.
"""

from bisect import bisect_right
from math import gcd, isqrt

import numpy as np

__all__ = [
    "xgcd",
    "primes_upto",
    "is_prime",
    "factorize",
    "divisors_from_factors",
    "divisors",
    "squarefree_flags",
    "smallest_prime_factors",
    "totient_sieve",
    "moebius_sieve",
]

_prime_cache: list[int] = []
_prime_cache_limit = 0


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with g = gcd(a, b) = a*x + b*y."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def primes_upto(n: int) -> list[int]:
    """All primes <= n, cached across calls."""
    global _prime_cache, _prime_cache_limit
    if n <= _prime_cache_limit:
        return _prime_cache[: bisect_right(_prime_cache, n)]
    sieve = bytearray([1]) * (n + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(range(p * p, n + 1, p)))
    _prime_cache = [i for i in range(2, n + 1) if sieve[i]]
    _prime_cache_limit = n
    return list(_prime_cache)


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin (valid far beyond 2^64)."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of n >= 1 by trial division (desk-scale inputs)."""
    if n < 1:
        raise ValueError("factorize expects n >= 1")
    fac: dict[int, int] = {}
    for p in (2, 3, 5):
        while n % p == 0:
            fac[p] = fac.get(p, 0) + 1
            n //= p
    p = 7
    # wheel over 2,3,5 residues
    gaps = (4, 2, 4, 2, 4, 6, 2, 6)
    i = 0
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            fac[p] = e
        p += gaps[i]
        i = (i + 1) & 7
    if n > 1:
        fac[n] = fac.get(n, 0) + 1
    return fac


def divisors_from_factors(fac: dict[int, int]) -> list[int]:
    divs = [1]
    for p, e in fac.items():
        pe = 1
        more = []
        for _ in range(e):
            pe *= p
            more.extend(d * pe for d in divs)
        divs.extend(more)
    divs.sort()
    return divs


def divisors(n: int) -> list[int]:
    return divisors_from_factors(factorize(n))


def squarefree_flags(lo: int, hi: int) -> bytearray:
    """flags[i] == 1 iff lo + i is squarefree, for 1 <= lo <= hi."""
    flags = bytearray([1]) * (hi - lo + 1)
    for p in primes_upto(isqrt(hi)):
        p2 = p * p
        start = ((lo + p2 - 1) // p2) * p2
        for m in range(start, hi + 1, p2):
            flags[m - lo] = 0
    return flags


def smallest_prime_factors(n: int) -> np.ndarray:
    """spf[m] = smallest prime factor of m (spf[0] = spf[1] = 0)."""
    spf = np.zeros(n + 1, dtype=np.int64)
    for p in primes_upto(n):
        sl = spf[p::p]
        sl[sl == 0] = p
    return spf


def factorize_with_spf(m: int, spf: np.ndarray) -> dict[int, int]:
    fac: dict[int, int] = {}
    while m > 1:
        p = int(spf[m])
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        fac[p] = e
    return fac


def totient_sieve(n: int) -> np.ndarray:
    """phi[0..n] as int64."""
    phi = np.arange(n + 1, dtype=np.int64)
    for p in primes_upto(n):
        phi[p::p] -= phi[p::p] // p
    return phi


def moebius_sieve(n: int) -> np.ndarray:
    """mu[0..n] as int8 (mu[0] = 0)."""
    mu = np.ones(n + 1, dtype=np.int8)
    mu[0] = 0
    for p in primes_upto(n):
        mu[p::p] *= -1
        p2 = p * p
        if p2 <= n:
            mu[p2::p2] = 0
    return mu
