"""The class group Cl(D) realized on reduced forms.

Composition is classical Dirichlet/Gauss composition (Cohen's "Composit"
variant) followed by reduction, so every operation returns the canonical
class representative.  The principal form is the only reduced form with
leading coefficient 1, which gives a constant-time identity test.

Ambiguous forms (b = 0, b = a, or a = c) square to the identity, so
even-exponent checks skip composing them; the equivalence is itself
re-verified by composition in the test sweeps.
"""

from math import gcd, isqrt
from typing import Iterable, NamedTuple, Sequence

from .arith import factorize, xgcd
from .qform import (
    Form,
    discriminant,
    enumerate_reduced,
    validate_discriminant,
)
from .qform import _enumerate_numpy, _enumerate_small, _reduce_triple

__all__ = [
    "ClassGroupSummary",
    "identity",
    "compose",
    "inverse",
    "power",
    "element_order",
    "exponent",
    "exponent_divides",
    "annihilating_exponents",
    "group_structure",
    "ambiguous_forms",
    "forms_by_discriminant",
    "exponent_survey",
]

GROUP_STRUCTURE_BUDGET = 10**5

# Early-exit scans look at small leading coefficients first; only the rare
# survivors pay for a full enumeration.
_QUICK_A_CAP = 256
_QUICK_MIN_CHECKED = 3


class ClassGroupSummary(NamedTuple):
    D: int
    h: int
    exponent: int
    elementary_divisors: tuple[int, ...]


def identity(D: int) -> Form:
    """The principal form of discriminant D."""
    validate_discriminant(D)
    if D % 4 == 0:
        return Form(1, 0, -D // 4)
    return Form(1, 1, (1 - D) // 4)


def _compose_triple(f1, f2, D):
    a1, b1, c1 = f1
    a2, b2, c2 = f2
    if a1 > a2:
        a1, b1, c1, a2, b2, c2 = a2, b2, c2, a1, b1, c1
    s = (b1 + b2) >> 1
    n = b2 - s
    if a2 % a1 == 0:
        y1 = 0
        d = a1
    else:
        d, u, _ = xgcd(a2, a1)
        y1 = u
    if s % d == 0:
        y2 = -1
        x2 = 0
        d1 = d
    else:
        d1, u2, v2 = xgcd(s, d)
        x2 = u2
        y2 = -v2
    v1 = a1 // d1
    v2_ = a2 // d1
    r = (y1 * y2 * n - x2 * c2) % v1
    a3 = v1 * v2_
    b3 = b2 + 2 * v2_ * r
    c3 = (c2 * d1 + r * (b2 + v2_ * r)) // v1
    return _reduce_triple(a3, b3, c3)


def compose(g1: Iterable[int], g2: Iterable[int]) -> Form:
    """Reduced representative of the Dirichlet composition of two classes."""
    f1 = tuple(g1)
    f2 = tuple(g2)
    D = validate_discriminant(discriminant(f1))
    if discriminant(f2) != D:
        raise ValueError(f"discriminant mismatch: {D} vs {discriminant(f2)}")
    return Form(*_compose_triple(f1, f2, D))


def inverse(g: Iterable[int]) -> Form:
    """Class inverse: [a, b, c] -> [a, -b, c], reduced."""
    a, b, c = g
    validate_discriminant(b * b - 4 * a * c)
    return Form(*_reduce_triple(a, -b, c))


def _power_triple(g, n, D):
    if n == 0:
        idg = identity(D)
        return (idg.a, idg.b, idg.c)
    acc = None
    base = tuple(g)
    while n:
        if n & 1:
            acc = base if acc is None else _compose_triple(acc, base, D)
        n >>= 1
        if n:
            base = _compose_triple(base, base, D)
    return acc


def power(g: Iterable[int], n: int) -> Form:
    """Class of g^n (n >= 0), reduced."""
    if n < 0:
        raise ValueError("power expects n >= 0")
    f = tuple(g)
    D = discriminant(f)
    validate_discriminant(D)
    if n == 0:
        return identity(D)
    return Form(*_power_triple(f, n, D))


def element_order(g: Iterable[int]) -> int:
    """Least n >= 1 with g^n principal."""
    f = tuple(g)
    D = validate_discriminant(discriminant(f))
    start = _reduce_triple(*f)
    x = start
    n = 1
    while x[0] != 1:
        x = _compose_triple(x, start, D)
        n += 1
    return n


def _order_dividing(g, bound, D):
    """Exact order of g given that it divides `bound`."""
    o = bound
    for p in factorize(bound):
        while o % p == 0 and _power_triple(g, o // p, D)[0] == 1:
            o //= p
    return o


def _exponent_from_forms(D: int, forms: Sequence[tuple[int, int, int]]) -> int:
    """lcm of element orders; `forms` may omit negative-b mates (same order)."""
    h = 0
    has_ambiguous = False
    pending = []
    for a, b, c in forms:
        if b < 0:
            continue
        h += 2 if (0 < b < a < c) else 1
        if a == 1:
            continue
        if b == 0 or b == a or a == c:
            has_ambiguous = True
        else:
            pending.append((a, b, c))
    L = 2 if has_ambiguous else 1
    for g in pending:
        if _power_triple(g, L, D)[0] == 1:
            continue
        o = _order_dividing(g, h, D)
        L = L * o // gcd(L, o)
    return L


def exponent(D: int) -> int:
    """Exponent of Cl(D): least E >= 1 with g^E principal for all classes."""
    validate_discriminant(D)
    return _exponent_from_forms(D, enumerate_reduced(D))


def _pow_small(g, n, D, memo):
    """g^n for small n with shared intermediate powers."""
    if n == 1:
        return g
    r = memo.get(n)
    if r is None:
        h = n >> 1
        r = _compose_triple(_pow_small(g, h, D, memo), _pow_small(g, n - h, D, memo), D)
        memo[n] = r
    return r


def annihilating_exponents(D: int, Es) -> frozenset:
    """Subset of Es consisting of the E with g^E principal for all classes.

    Streams over reduced forms smallest-a first and drops each E at its
    first failing form, so the common all-fail case never enumerates the
    whole group.
    """
    validate_discriminant(D)
    alive = set(Es)
    if any(E < 1 for E in alive):
        raise ValueError("exponent bounds must be >= 1")
    amax = isqrt(-D // 3)
    cap = min(_QUICK_A_CAP, amax)
    bpar = D & 1
    checked = 0
    a_seen = cap
    for a in range(2, cap + 1):
        fa = 4 * a
        for b in range(bpar, a + 1, 2):
            num = b * b - D
            if num % fa:
                continue
            c = num // fa
            if c < a:
                continue
            if gcd(gcd(a, b), c) != 1:
                continue
            if b == 0 or b == a or a == c:
                alive = {E for E in alive if E % 2 == 0}
            else:
                memo = {}
                alive = {
                    E for E in alive if _pow_small((a, b, c), E, D, memo)[0] == 1
                }
                checked += 1
            if not alive:
                return frozenset()
        if checked >= _QUICK_MIN_CHECKED and a >= 32:
            a_seen = a
            break
    if a_seen >= amax:
        return frozenset(alive)
    forms = _enumerate_numpy(D) if _numpy_ok(D) else _enumerate_small(D)
    for a, b, c in forms:
        if a <= a_seen or b < 0 or a == 1:
            continue
        if b == 0 or b == a or a == c:
            alive = {E for E in alive if E % 2 == 0}
        else:
            memo = {}
            alive = {E for E in alive if _pow_small((a, b, c), E, D, memo)[0] == 1}
        if not alive:
            return frozenset()
    return frozenset(alive)


def exponent_divides(D: int, E: int) -> bool:
    """True iff g^E is principal for every reduced form g of discriminant D.

    Exits on the first failing form; typical failures cost one composition
    chain on the first non-principal class.
    """
    return E in annihilating_exponents(D, (E,))


def _numpy_ok(D):
    from .qform import _NUMPY_ENUM_MAX, _NUMPY_ENUM_MIN

    return _NUMPY_ENUM_MIN < -D < _NUMPY_ENUM_MAX


def ambiguous_forms(D: int) -> list[Form]:
    """Reduced forms with b = 0, a = b, or a = c (the order <= 2 classes)."""
    return [g for g in enumerate_reduced(D) if g.b == 0 or g.b == g.a or g.a == g.c]


def _order_counts(D, forms, E):
    """Multiset {order: multiplicity} over all h classes."""
    counts: dict[int, int] = {}
    for a, b, c in forms:
        if b < 0:
            continue
        weight = 2 if (0 < b < a < c) else 1
        if a == 1:
            o = 1
        elif b == 0 or b == a or a == c:
            o = 2
        else:
            o = _order_dividing((a, b, c), E, D)
        counts[o] = counts.get(o, 0) + weight
    return counts


def _partition_from_counts(p, counts):
    """Cyclic p-power factors of the p-Sylow subgroup from order counts."""
    # N_j = #elements killed by p^j; column differences of log_p N_j give
    # the conjugate partition.
    n_prev = 1
    cols = []
    j = 1
    while True:
        pj = p**j
        nj = sum(m for o, m in counts.items() if o == _p_part(o, p) and o <= pj)
        col = _ilog(nj // n_prev, p)
        if col == 0:
            break
        cols.append(col)
        n_prev = nj
        j += 1
    lam = []
    for i in range(1, (cols[0] + 1) if cols else 1):
        lam.append(sum(1 for cval in cols if cval >= i))
    return [p**k for k in lam if k > 0]


def _p_part(n, p):
    r = 1
    while n % p == 0:
        n //= p
        r *= p
    return r


def _ilog(n, p):
    k = 0
    while n > 1:
        if n % p:
            raise AssertionError("order profile is not a prime power")
        n //= p
        k += 1
    return k


def group_structure(D: int) -> ClassGroupSummary:
    """Elementary divisors d1 | d2 | ... | dk of Cl(D) (product = h)."""
    validate_discriminant(D)
    forms = enumerate_reduced(D)
    h = len(forms)
    if h > GROUP_STRUCTURE_BUDGET:
        raise ValueError(f"class number {h} exceeds structure budget {GROUP_STRUCTURE_BUDGET}")
    E = _exponent_from_forms(D, forms)
    if h == 1:
        return ClassGroupSummary(D, 1, 1, ())
    counts = _order_counts(D, forms, E)
    per_prime = {}
    for p in factorize(h):
        part = _partition_from_counts(p, counts)
        part.sort(reverse=True)
        per_prime[p] = part
    width = max(len(v) for v in per_prime.values())
    divs = []
    for i in range(width):
        d = 1
        for p, part in per_prime.items():
            if i < len(part):
                d *= part[i]
        divs.append(d)
    divs.sort()
    return ClassGroupSummary(D, h, E, tuple(divs))


def _survey_chunk(args):
    lo, hi = args
    out = {}
    for n, forms in forms_by_discriminant(lo, hi).items():
        h = sum(2 if (0 < b < a < c) else 1 for a, b, c in forms)
        out[n] = (h, _exponent_from_forms(-n, forms))
    return out


def exponent_survey(bound: int, threads: int = 1) -> dict[int, tuple[int, int]]:
    """{|D|: (h, exponent)} for every discriminant with |D| <= bound.

    Batch alternative to calling class_number/exponent per discriminant;
    one shared triple scan enumerates every reduced form in range.
    """
    import multiprocessing

    chunk = 12500
    jobs = [(lo, min(lo + chunk - 1, bound)) for lo in range(3, bound + 1, chunk)]
    if threads > 1 and len(jobs) > 1:
        with multiprocessing.Pool(threads) as pool:
            parts = pool.map(_survey_chunk, jobs)
    else:
        parts = [_survey_chunk(j) for j in jobs]
    merged: dict[int, tuple[int, int]] = {}
    for part in parts:
        merged.update(part)
    return merged


def forms_by_discriminant(lo: int, hi: int) -> dict[int, list[tuple[int, int, int]]]:
    """Reduced forms with b >= 0, grouped by |D|, for all lo <= |D| <= hi.

    One triple scan over (a, b, c) covers the whole block; negative-b mates
    are implied (each (a, b, c) with 0 < b < a < c stands for two classes).
    """
    if lo < 3:
        lo = 3
    by: dict[int, list[tuple[int, int, int]]] = {}
    amax = isqrt(hi // 3)
    for a in range(1, amax + 1):
        fa = 4 * a
        for b in range(0, a + 1):
            bb = b * b
            cmin = -((-(lo + bb)) // fa)
            if cmin < a:
                cmin = a
            cmax = (hi + bb) // fa
            if cmax < cmin:
                continue
            g_ab = gcd(a, b)
            if g_ab == 1:
                for c in range(cmin, cmax + 1):
                    by.setdefault(fa * c - bb, []).append((a, b, c))
            else:
                for c in range(cmin, cmax + 1):
                    if gcd(g_ab, c) == 1:
                        by.setdefault(fa * c - bb, []).append((a, b, c))
    return by
