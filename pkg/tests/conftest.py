"""Shared independent oracles for the test suite.

Everything here deliberately avoids the library's own fast paths: forms are
enumerated by the naive double loop, composition goes through ideal
products in the quadratic order, and reduction is cross-checked by orbit
search.  Keep it slow and obvious.
"""

from math import gcd, isqrt

import pytest


def naive_reduced_forms(D):
    """Double loop over (a, b); the reference enumeration."""
    out = []
    for a in range(1, isqrt(-D // 3) + 1):
        for b in range(-a + 1, a + 1):
            if (b - D) % 2:
                continue
            num = b * b - D
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a:
                continue
            if b < 0 and (-b == a or a == c):
                continue
            if gcd(gcd(a, b), c) != 1:
                continue
            out.append((a, b, c))
    out.sort()
    return out


def apply_sl2(mat, form):
    """Right action of [[p, q], [r, s]] on a form: g(px + qy, rx + sy)."""
    p, q, r, s = mat
    a, b, c = form
    return (
        a * p * p + b * p * r + c * r * r,
        2 * a * p * q + b * (p * s + q * r) + 2 * c * r * s,
        a * q * q + b * q * s + c * s * s,
    )


def mat_mul(m1, m2):
    p1, q1, r1, s1 = m1
    p2, q2, r2, s2 = m2
    return (
        p1 * p2 + q1 * r2,
        p1 * q2 + q1 * s2,
        r1 * p2 + s1 * r2,
        r1 * q2 + s1 * s2,
    )


GEN_T = (1, 1, 0, 1)
GEN_TI = (1, -1, 0, 1)
GEN_S = (0, -1, 1, 0)


def orbit_reduced_forms(form, coeff_bound):
    """Breadth-first search of the SL2(Z) orbit with bounded coefficients;
    returns the reduced forms encountered."""
    seen = {tuple(form)}
    frontier = [tuple(form)]
    found = set()
    while frontier:
        nxt = []
        for f in frontier:
            for mat in (GEN_T, GEN_TI, GEN_S):
                g = apply_sl2(mat, f)
                if max(abs(x) for x in g) > coeff_bound or g in seen:
                    continue
                seen.add(g)
                nxt.append(g)
                a, b, c = g
                if -a < b <= a <= c and not (b < 0 and a == c) and a >= 1:
                    if b >= 0 or (-b != a and a != c):
                        found.add(g)
        frontier = nxt
    a, b, c = form
    if -a <= b <= a <= c and not (b < 0 and (-b == a or a == c)) and a >= 1:
        found.add(tuple(form))
    return found


# --- ideal arithmetic in the order of discriminant D ---------------------
# elements are u + v*w with w = (D + sqrt(D))/2, so w^2 = D*w - (D^2 - D)/4


def _mul(x, y, D):
    u1, v1 = x
    u2, v2 = y
    q = D * (D - 1) // 4
    return (u1 * u2 - v1 * v2 * q, u1 * v2 + v1 * u2 + v1 * v2 * D)


def _hnf_basis(rows):
    """Basis ((m, 0), (u0, d)) of the lattice spanned by integer pairs."""
    rows = [r for r in rows if r != (0, 0)]
    # combine to a single row with minimal positive v
    cur = None
    for u, v in rows:
        if cur is None:
            cur = (u, v)
            continue
        u0, d0 = cur
        g, x, y = _xgcd(d0, v)
        cur = (x * u0 + y * u, g)
    u0, d = cur
    if d < 0:
        u0, d = -u0, -d
    us = []
    for u, v in rows:
        k = v // d
        us.append(u - k * u0)
    m = 0
    for u in us:
        m = gcd(m, u)
    m = abs(m)
    return m, u0 % m if m else u0, d


def _xgcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def ideal_of_form(form, D):
    """Z-basis rows for a*Z + ((-b + sqrt(D))/2)*Z in (1, w) coordinates."""
    a, b, c = form
    return [(a, 0), ((-b - D) // 2, 1)]


def form_of_ideal(m, u0, d, D):
    norm = m * d
    A, rem = divmod(m * m, norm)
    assert rem == 0
    B_num = 2 * m * u0 + m * d * D
    B, rem = divmod(B_num, norm)
    assert rem == 0
    C_num = u0 * u0 + u0 * d * D + d * d * (D * D - D) // 4
    C, rem = divmod(C_num, norm)
    assert rem == 0
    return (A, B, C)


def ideal_product_form(f1, f2, D):
    """Reduced form of the product ideal; the independent composition
    oracle."""
    from cmforms.qform import reduce_form

    g1 = ideal_of_form(f1, D)
    g2 = ideal_of_form(f2, D)
    rows = [_mul(x, y, D) for x in g1 for y in g2]
    m, u0, d = _hnf_basis(rows)
    a, b, c = form_of_ideal(m, u0, d, D)
    g = gcd(gcd(a, abs(b)), c)
    a, b, c = a // g, b // g, c // g
    return tuple(reduce_form((a, -b, c)))


@pytest.fixture(scope="session")
def survey_10k():
    from cmforms.classgroup import exponent_survey

    return exponent_survey(10**4)
