"""Primitive positive-definite binary quadratic forms [a, b, c].

A form is a triple of exact integers with a >= 1, gcd(a, b, c) = 1 and
negative discriminant b^2 - 4ac.  Its root in the upper half plane (the CM
point) identifies the form with a point of the modular curve; reduced forms
are the canonical SL2(Z)-class representatives whose CM points lie in the
standard fundamental domain (left boundary and left arc included, right
side excluded).

All operations are pure functions of immutable values and safe to call
concurrently.
"""

from functools import lru_cache
from math import gcd, isqrt, sqrt
from typing import Iterable, NamedTuple

import numpy as np

from .arith import divisors_from_factors, factorize, is_prime, primes_upto

__all__ = [
    "Form",
    "FactoredDiscriminant",
    "make_form",
    "validate_discriminant",
    "discriminant",
    "is_reduced",
    "reduce_form",
    "enumerate_reduced",
    "class_number",
    "kronecker",
    "factor_discriminant",
    "is_fundamental",
    "cm_point",
]

# Above this the b-outer enumeration switches to vectorized trial division;
# int64 stays exact up to |D| ~ 2^60 (intermediates are ~|D|/3).
_NUMPY_ENUM_MIN = 10**6
_NUMPY_ENUM_MAX = 1 << 60


class Form(NamedTuple):
    """A binary quadratic form a*x^2 + b*x*y + c*y^2, interchangeable with
    a plain (a, b, c) tuple."""

    a: int
    b: int
    c: int


class FactoredDiscriminant(NamedTuple):
    """D = d0 * f^2 with d0 fundamental and f >= 1 (the conductor)."""

    d0: int
    f: int


def make_form(a: int, b: int, c: int) -> Form:
    """Validated Form constructor: a >= 1, primitive, negative discriminant."""
    if a < 1:
        raise ValueError(f"form [{a},{b},{c}]: leading coefficient must be >= 1")
    if gcd(gcd(a, b), c) != 1:
        raise ValueError(f"form [{a},{b},{c}] is not primitive")
    if b * b - 4 * a * c >= 0:
        raise ValueError(f"form [{a},{b},{c}] has nonnegative discriminant")
    return Form(a, b, c)


def validate_discriminant(D: int) -> int:
    """Check D < 0 and D = 0 or 1 (mod 4); return D."""
    if D >= 0 or D % 4 not in (0, 1):
        raise ValueError(f"{D} is not a negative discriminant (need D < 0, D = 0,1 mod 4)")
    return D


def discriminant(form: Iterable[int]) -> int:
    a, b, c = form
    return b * b - 4 * a * c


def is_reduced(form: Iterable[int]) -> bool:
    """|b| <= a <= c, with b >= 0 whenever |b| = a or a = c."""
    a, b, c = form
    if not (-a <= b <= a <= c):
        return False
    if b < 0 and (-b == a or a == c):
        return False
    return True


def _reduce_triple(a: int, b: int, c: int) -> tuple[int, int, int]:
    # translation: b into (-a, a]; inversion: swap when c < a
    while True:
        if b > a or b <= -a:
            r = b % (2 * a)
            if r > a:
                r -= 2 * a
            c += (r * r - b * b) // (4 * a)
            b = r
        if a > c:
            a, b, c = c, -b, a
            continue
        if b < 0 and (-b == a or a == c):
            b = -b
        return a, b, c


def reduce_form(form: Iterable[int]) -> Form:
    """The unique reduced form SL2(Z)-equivalent to the input."""
    a, b, c = form
    if a < 1:
        raise ValueError("leading coefficient must be >= 1")
    if b * b - 4 * a * c >= 0:
        raise ValueError("form must have negative discriminant")
    return Form(*_reduce_triple(a, b, c))


def _enumerate_small(D: int) -> list[tuple[int, int, int]]:
    # b-outer scan with plain trial division; fine up to |D| ~ 1e6
    out = []
    bmax = isqrt(-D // 3)
    small = primes_upto(isqrt((bmax * bmax - D) >> 2) + 1)
    for b in range(D & 1, bmax + 1, 2):
        m = (b * b - D) >> 2
        fac = {}
        r = m
        for p in small:
            if p * p > r:
                break
            if r % p == 0:
                e = 0
                while r % p == 0:
                    r //= p
                    e += 1
                fac[p] = e
        if r > 1:
            fac[r] = fac.get(r, 0) + 1
        lim = isqrt(m)
        for a in divisors_from_factors(fac):
            if a < b or a < 1 or a > lim:
                continue
            c = m // a
            if gcd(gcd(a, b), c) != 1:
                continue
            out.append((a, b, c))
            if 0 < b < a < c:
                out.append((a, -b, c))
    return out


def _enumerate_numpy(D: int) -> list[tuple[int, int, int]]:
    # vectorized trial division of m(b) = (b^2 - D)/4 across all b at once
    bmax = isqrt(-D // 3)
    bs = list(range(D & 1, bmax + 1, 2))
    ms = [(b * b - D) >> 2 for b in bs]
    rem = np.array(ms, dtype=np.int64)
    factors: list[list[tuple[int, int]]] = [[] for _ in bs]
    for p in primes_upto(isqrt(int(rem.max()))):
        idx = np.nonzero(rem % p == 0)[0]
        if idx.size == 0:
            continue
        for i in idx.tolist():
            r = int(rem[i])
            e = 0
            while r % p == 0:
                r //= p
                e += 1
            rem[i] = r
            factors[i].append((p, e))
    out = []
    for i, b in enumerate(bs):
        m = ms[i]
        fac = dict(factors[i])
        r = int(rem[i])
        if r > 1:
            fac[r] = fac.get(r, 0) + 1
        lim = isqrt(m)
        for a in divisors_from_factors(fac):
            if a < b or a < 1 or a > lim:
                continue
            c = m // a
            if gcd(gcd(a, b), c) != 1:
                continue
            out.append((a, b, c))
            if 0 < b < a < c:
                out.append((a, -b, c))
    return out


def enumerate_reduced(D: int) -> list[Form]:
    """All reduced primitive forms of discriminant D, ascending by (a, b)."""
    validate_discriminant(D)
    if _NUMPY_ENUM_MIN < -D < _NUMPY_ENUM_MAX:
        raw = _enumerate_numpy(D)
    else:
        raw = _enumerate_small(D)
    raw.sort()
    return [Form(*t) for t in raw]


def class_number(D: int) -> int:
    """h(D) = number of reduced primitive forms of discriminant D."""
    return len(enumerate_reduced(D))


@lru_cache(maxsize=1 << 18)
def _kronecker_prime(n: int, p: int) -> int:
    # p must already be prime; hot path for the conductor machinery
    if p == 2:
        if n % 2 == 0:
            return 0
        return 1 if n % 8 in (1, 7) else -1
    r = pow(n % p, (p - 1) // 2, p)
    if r == 0:
        return 0
    return 1 if r == 1 else -1


def kronecker(n: int, p: int) -> int:
    """Kronecker symbol (n/p) for prime p."""
    if not is_prime(p):
        raise ValueError(f"kronecker: {p} is not prime")
    return _kronecker_prime(n, p)


def is_fundamental(D: int) -> bool:
    """True iff D is the discriminant of a quadratic field."""
    if D >= 0 or D % 4 not in (0, 1):
        return False
    return factor_discriminant(D).f == 1


@lru_cache(maxsize=1 << 16)
def factor_discriminant(D: int) -> FactoredDiscriminant:
    """Split D = d0 * f^2 with d0 fundamental."""
    validate_discriminant(D)
    n = -D
    s = 1
    m = 1
    for p, e in factorize(n).items():
        s *= p ** (e // 2)
        if e % 2:
            m *= p
    # n = m * s^2 with m squarefree
    if m % 4 == 3:  # -m = 1 mod 4: already fundamental
        return FactoredDiscriminant(-m, s)
    # otherwise the fundamental discriminant is -4m; s picked up a factor 2
    if s % 2:
        raise AssertionError(f"inconsistent discriminant factorization for {D}")
    return FactoredDiscriminant(-4 * m, s // 2)


def cm_point(form: Iterable[int]) -> tuple[float, float]:
    """Root of a*z^2 + b*z + c in the upper half plane, as an (x, y) pair:
    (-b + i*sqrt(|D|)) / (2a)."""
    a, b, c = form
    return (-b / (2 * a), sqrt(4 * a * c - b * b) / (2 * a))
