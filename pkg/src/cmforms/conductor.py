"""Divisibility constraints on conductors of orders with small class-group
exponent.

For D = d0 * f^2 the quantity L(f) = lcm{ p^(k-1) (p - (d0/p)) : p^k || f }
divides 12 * u * E, where u is the unit count of the maximal order and E
the exponent of Cl(D).  theta inverts L in the weak sense f | theta(L(f)),
which turns the bound into a finite, enumerable candidate set.
"""

from functools import lru_cache
from math import gcd
from typing import NamedTuple

from .arith import factorize, primes_upto
from .classgroup import exponent
from .qform import (
    _kronecker_prime,
    class_number,
    factor_discriminant,
    is_fundamental,
    validate_discriminant,
)

__all__ = [
    "ConductorCandidate",
    "unit_count",
    "L_of",
    "conductor_divisibility_bound",
    "check_conductor_bound",
    "theta",
    "candidate_conductors",
    "allowed_prime_powers",
    "order_class_number",
]


class ConductorCandidate(NamedTuple):
    d0: int
    f: int
    L_value: int
    bound: int


def unit_count(d0: int) -> int:
    """|units| of the maximal order: 6 for -3, 4 for -4, else 2."""
    if not is_fundamental(d0):
        raise ValueError(f"{d0} is not a fundamental discriminant")
    if d0 == -3:
        return 6
    if d0 == -4:
        return 4
    return 2


def _require_fundamental(d0: int) -> None:
    if not is_fundamental(d0):
        raise ValueError(f"{d0} is not a fundamental discriminant")


def _L_component(d0: int, p: int, k: int) -> int:
    return p ** (k - 1) * (p - _kronecker_prime(d0, p))


def L_of(d0: int, f: int) -> int:
    """lcm over p^k || f of p^(k-1) * (p - (d0/p)); empty lcm is 1."""
    _require_fundamental(d0)
    if f < 1:
        raise ValueError("conductor must be >= 1")
    L = 1
    for p, k in factorize(f).items():
        comp = _L_component(d0, p, k)
        L = L * comp // gcd(L, comp)
    return L


def conductor_divisibility_bound(d0: int, E: int) -> int:
    """12 * |units| * E."""
    if E < 1:
        raise ValueError("exponent must be >= 1")
    return 12 * unit_count(d0) * E


def check_conductor_bound(D: int) -> bool:
    """L(f) divides 12 * |units| * Exp Cl(D) for D = d0 f^2."""
    validate_discriminant(D)
    d0, f = factor_discriminant(D)
    bound = 12 * unit_count(d0) * exponent(D)
    return bound % L_of(d0, f) == 0


@lru_cache(maxsize=1 << 13)
def theta(d0: int, m: int) -> int:
    """Product of p^k over prime powers with L(p^k) | m, one maximal k per
    prime.

    Only p <= m + 1 can contribute (L(p) >= p - 1), and for fixed p the
    component grows by a factor p with k, so the k search terminates.
    """
    _require_fundamental(d0)
    if m < 1:
        raise ValueError("m must be >= 1")
    result = 1
    for p, kmax in allowed_prime_powers(d0, m):
        result *= p**kmax
    return result


def allowed_prime_powers(d0: int, m: int) -> list[tuple[int, int]]:
    """(p, k_max) for all primes with L(p^k) | m for some k >= 1.

    Divisibility is downward closed in k, so k_max characterizes the whole
    admissible range 1..k_max.
    """
    out = []
    for p in primes_upto(m + 1):
        if m % (p - _kronecker_prime(d0, p)):
            continue
        k = 1
        while True:
            nxt = _L_component(d0, p, k + 1)
            if nxt > m or m % nxt:
                break
            k += 1
        out.append((p, k))
    return out


def candidate_conductors(d0: int, E: int) -> list[int]:
    """All f >= 1 with L(f) | 12 * |units| * E, sorted ascending.

    These are exactly the divisors of theta(d0, bound): each prime power of
    theta satisfies L(p^k) | bound, an lcm of divisors of the bound divides
    the bound, and conversely every admissible f divides theta(L(f)) with
    theta monotone under divisibility of m.
    """
    bound = conductor_divisibility_bound(d0, E)
    fs = [1]
    for p, kmax in allowed_prime_powers(d0, bound):
        pe = 1
        more = []
        for _ in range(kmax):
            pe *= p
            more.extend(f * pe for f in fs)
        fs.extend(more)
    fs.sort()
    return fs


def order_class_number(d0: int, f: int) -> int:
    """h(d0 f^2) from h(d0) via the conductor formula.

    h(d0) * f * prod_{p | f} (1 - (d0/p)/p), divided by the unit index
    (3 for d0 = -3, 2 for d0 = -4) when f > 1.
    """
    _require_fundamental(d0)
    if f < 1:
        raise ValueError("conductor must be >= 1")
    h = class_number(d0)
    num = h
    for p, k in factorize(f).items():
        num *= p ** (k - 1) * (p - _kronecker_prime(d0, p))
    if f > 1 and d0 == -3:
        num, rem = divmod(num, 3)
    elif f > 1 and d0 == -4:
        num, rem = divmod(num, 2)
    else:
        rem = 0
    if rem:
        raise AssertionError(f"unit-index correction failed for ({d0}, {f})")
    return num
