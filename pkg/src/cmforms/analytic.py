"""Summatory functions behind the boundary-count predictor.

Exact values come from sieves over plain integers; estimates are the
leading asymptotic terms.  The big-O constants are not part of the
estimates: tests carry empirically calibrated envelope constants (see
tests/calibrate_envelopes.py).
"""

from functools import lru_cache
from math import fsum, log, pi
from typing import NamedTuple, Union

import numpy as np

from .arith import moebius_sieve, totient_sieve

__all__ = [
    "AsymptoticCheck",
    "coprime_count",
    "totient_sum",
    "totient_over_square_sum",
    "gamma0",
    "EULER_GAMMA",
]

# Euler-Mascheroni constant, 20 digits
EULER_GAMMA = 0.57721566490153286061


class AsymptoticCheck(NamedTuple):
    """One exact-vs-estimate comparison with its error envelope."""

    T: int
    exact: Union[int, float]
    estimate: float
    error_bound: float

    @property
    def ok(self) -> bool:
        return abs(self.exact - self.estimate) <= self.error_bound


@lru_cache(maxsize=8)
def _phi(n: int) -> np.ndarray:
    return totient_sieve(n)


@lru_cache(maxsize=8)
def _mu(n: int) -> np.ndarray:
    return moebius_sieve(n)


def _distinct_primes(a: int) -> list[int]:
    ps = []
    n = a
    p = 2
    while p * p <= n:
        if n % p == 0:
            ps.append(p)
            while n % p == 0:
                n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        ps.append(n)
    return ps


def coprime_count(T: int, a: int) -> tuple[int, float]:
    """(exact, estimate) for #{c <= T : gcd(c, a) = 1}.

    exact by inclusion-exclusion over the squarefree divisors of a;
    estimate is phi(a) * T / a.
    """
    if T < 1 or a < 1:
        raise ValueError("need T >= 1 and a >= 1")
    primes = _distinct_primes(a)
    pairs = [(1, 1)]
    for p in primes:
        pairs += [(d * p, -s) for d, s in pairs]
    exact = sum(s * (T // d) for d, s in pairs)
    phi_a = a
    for p in primes:
        phi_a = phi_a // p * (p - 1)
    estimate = phi_a * T / a
    return exact, estimate


def totient_sum(T: int) -> tuple[int, float]:
    """(exact, estimate) for sum_{a <= T} phi(a); estimate = 3 T^2 / pi^2."""
    if T < 1:
        raise ValueError("need T >= 1")
    exact = int(_phi(T)[1:].sum())
    estimate = 3.0 * T * T / (pi * pi)
    return exact, estimate


def totient_over_square_sum(T: int) -> tuple[float, float]:
    """(exact, estimate) for sum_{a <= T} phi(a)/a^2.

    exact is accumulated with compensated summation; the estimate is
    (6/pi^2) log T + gamma0.
    """
    if T < 2:
        raise ValueError("need T >= 2")
    phi = _phi(T)
    exact = fsum(int(phi[a]) / (a * a) for a in range(1, T + 1))
    g0, _ = gamma0(10**6)
    estimate = (6.0 / (pi * pi)) * log(T) + g0
    return exact, estimate


@lru_cache(maxsize=4)
def gamma0(precision_terms: int) -> tuple[float, float]:
    """Partial sum of sum_{d >= 1} mu(d) (gamma - log d) / d^2 and a bound
    on the discarded tail."""
    if precision_terms < 10**3:
        raise ValueError("need at least 1e3 terms")
    N = precision_terms
    mu = _mu(N)
    value = fsum(
        int(mu[d]) * (EULER_GAMMA - log(d)) / (d * d) for d in range(1, N + 1) if mu[d]
    )
    # |tail| <= sum_{d > N} (gamma + log d)/d^2 <= (gamma + log N + 1) / N
    tail = (EULER_GAMMA + log(N) + 1.0) / N
    return value, tail
