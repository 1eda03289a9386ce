"""CM points on the boundary of the fundamental domain.

Reduced forms [a, a, c] sit on the left boundary (x = -1/2), forms
[a, b, a] on the unit-circle arc between angles pi/2 and 2pi/3, and forms
[a, 0, c] on the imaginary axis.  The corner form [1, 1, 1] belongs to both
boundary pieces and carries its own tag so combined statistics count it
once.

Counting boundary points with |D| <= Delta reduces, after the substitution
t = y^2 + 1/4, to counting coprime pairs (a, c) with bounded 4ac - a^2; the
expected count of c/a in [X, Y] is (3 Delta / (2 pi^2)) times the measure
of [X, Y] under 2 dt / (4t - 1).
"""

import enum
from fractions import Fraction
from math import exp, gcd, isqrt, log, pi
from typing import Iterable, NamedTuple, Union

from .classgroup import _compose_triple, identity
from .qform import Form, is_reduced, validate_discriminant, enumerate_reduced

__all__ = [
    "BoundaryLocation",
    "IntervalCount",
    "classify_location",
    "enumerate_left_boundary",
    "enumerate_lower_arc",
    "count_left_boundary",
    "count_lower_arc",
    "arc_transform",
    "count_R_interval",
    "boundary_matches_two_torsion",
    "all_on_boundary",
    "equidistribution_report",
]

Rational = Union[int, Fraction]


class BoundaryLocation(enum.Enum):
    LEFT_BOUNDARY = "LeftBoundary"
    LOWER_ARC = "LowerArc"
    CORNER = "Corner"
    IMAGINARY_AXIS = "ImaginaryAxis"
    INTERIOR = "Interior"


class IntervalCount(NamedTuple):
    delta: int
    x_lo: Fraction
    x_hi: Fraction
    exact: int
    predicted: float


def classify_location(g: Iterable[int]) -> BoundaryLocation:
    """Where the CM point of a reduced form sits relative to the boundary.

    Priority: Corner beats the two boundary pieces; the arc and the left
    boundary beat the imaginary axis (so [1, 0, 1] is LowerArc).
    """
    a, b, c = g
    if not is_reduced((a, b, c)):
        raise ValueError(f"form [{a},{b},{c}] is not reduced")
    if a == b == c:
        return BoundaryLocation.CORNER
    if a == c:
        return BoundaryLocation.LOWER_ARC
    if b == a:
        return BoundaryLocation.LEFT_BOUNDARY
    if b == 0:
        return BoundaryLocation.IMAGINARY_AXIS
    return BoundaryLocation.INTERIOR


def enumerate_left_boundary(delta: int) -> list[Form]:
    """Forms [a, a, c], gcd(a, c) = 1, c >= a, with |D| = 4ac - a^2 <= delta."""
    if delta < 3:
        raise ValueError("delta must be >= 3")
    out = []
    for a in range(1, isqrt(delta // 3) + 1):
        cmax = (delta + a * a) // (4 * a)
        for c in range(a, cmax + 1):
            if gcd(a, c) == 1:
                out.append(Form(a, a, c))
    out.sort()
    return out


def enumerate_lower_arc(delta: int) -> list[Form]:
    """Forms [a, b, a], 0 <= b <= a, gcd(a, b) = 1, |D| = 4a^2 - b^2 <= delta."""
    if delta < 3:
        raise ValueError("delta must be >= 3")
    out = []
    for a in range(1, isqrt(delta // 3) + 1):
        lo = 4 * a * a - delta
        bmin = 0 if lo <= 0 else _ceil_sqrt(lo)
        for b in range(bmin, a + 1):
            if gcd(a, b) == 1:
                out.append(Form(a, b, a))
    out.sort()
    return out


def count_left_boundary(delta: int) -> int:
    """len(enumerate_left_boundary(delta)) without materializing the forms."""
    if delta < 3:
        raise ValueError("delta must be >= 3")
    total = 0
    for a in range(1, isqrt(delta // 3) + 1):
        total += _coprime_in_range(a, a, (delta + a * a) // (4 * a))
    return total


def count_lower_arc(delta: int) -> int:
    """len(enumerate_lower_arc(delta)) without materializing the forms."""
    if delta < 3:
        raise ValueError("delta must be >= 3")
    total = 0
    for a in range(1, isqrt(delta // 3) + 1):
        lo = 4 * a * a - delta
        bmin = 0 if lo <= 0 else _ceil_sqrt(lo)
        total += _coprime_in_range(a, bmin, a)
    return total


def _ceil_sqrt(n: int) -> int:
    r = isqrt(n)
    return r if r * r == n else r + 1


def arc_transform(g: Iterable[int]) -> Form:
    """Image of a lower-arc form under z -> -1/(z + 1).

    Maps the arc onto the segment {-1/2 + iy : 1/2 <= y <= sqrt(3)/2};
    returns the (generally unreduced) triple whose CM point is the image.
    """
    a, b, c = g
    if a != c or not (0 <= b <= a):
        raise ValueError(f"form [{a},{b},{c}] is not on the lower arc")
    return Form(2 * a - b, 2 * a - b, a)


def _squarefree_divisor_signs(a: int) -> list[tuple[int, int]]:
    """(d, mu(d)) for every squarefree divisor d of a."""
    pairs = [(1, 1)]
    n = a
    p = 2
    while p * p <= n:
        if n % p == 0:
            pairs += [(d * p, -s) for d, s in pairs]
            while n % p == 0:
                n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        pairs += [(d * n, -s) for d, s in pairs]
    return pairs


def _coprime_in_range(a: int, lo: int, hi: int) -> int:
    """#{lo <= c <= hi : gcd(c, a) = 1}."""
    if hi < lo:
        return 0
    if a == 1:
        return hi - lo + 1
    lo1 = lo - 1
    return sum(s * (hi // d - lo1 // d) for d, s in _squarefree_divisor_signs(a))


def count_R_interval(delta: int, x_lo: Rational, x_hi: Rational) -> IntervalCount:
    """Exact and predicted counts of coprime c/a in [x_lo, x_hi] with
    4ac - a^2 <= delta."""
    X = Fraction(x_lo)
    Y = Fraction(x_hi)
    if not (Fraction(1, 2) <= X < Y):
        raise ValueError(f"need 1/2 <= X < Y, got [{X}, {Y}]")
    if delta < 3:
        raise ValueError("delta must be >= 3")
    # a ranges while a*X <= Delta/(4a) + a/4, i.e. a^2 (4X - 1) <= Delta
    px, qx = X.numerator, X.denominator
    py, qy = Y.numerator, Y.denominator
    amax = isqrt(delta * qx // (4 * px - qx))
    exact = 0
    for a in range(1, amax + 1):
        lo = -((-px * a) // qx)  # ceil(a X)
        hi = min((py * a) // qy, (delta + a * a) // (4 * a))
        exact += _coprime_in_range(a, lo, hi)
    predicted = (3 * delta / (2 * pi * pi)) * 0.5 * (log(float(4 * Y - 1)) - log(float(4 * X - 1)))
    return IntervalCount(delta, X, Y, exact, predicted)


def boundary_matches_two_torsion(D: int) -> bool:
    """Boundary-or-axis classes coincide with the classes of order <= 2,
    and the imaginary axis is occupied only for D = 0 mod 4."""
    validate_discriminant(D)
    idf = tuple(identity(D))
    on_axis = False
    for g in enumerate_reduced(D):
        loc = classify_location(g)
        on_boundary = loc is not BoundaryLocation.INTERIOR
        order_le_2 = _compose_triple(g, g, D) == idf
        if on_boundary != order_le_2:
            return False
        if loc is BoundaryLocation.IMAGINARY_AXIS:
            on_axis = True
    if on_axis and D % 4 != 0:
        return False
    return True


def all_on_boundary(D: int) -> bool:
    """True iff every reduced form's CM point lies on the boundary proper
    (left boundary, lower arc, or the corner)."""
    validate_discriminant(D)
    boundary_tags = (
        BoundaryLocation.LEFT_BOUNDARY,
        BoundaryLocation.LOWER_ARC,
        BoundaryLocation.CORNER,
    )
    return all(classify_location(g) in boundary_tags for g in enumerate_reduced(D))


def equidistribution_report(delta: int, bins: int, k_hi: Rational) -> list[IntervalCount]:
    """Per-bin exact/predicted counts over [1/2, k_hi] split into bins of
    equal measure under 2 dt / (4t - 1)."""
    K = Fraction(k_hi)
    if delta < 3:
        raise ValueError("delta must be >= 3")
    if bins < 1:
        raise ValueError("bins must be >= 1")
    if K <= Fraction(1, 2):
        raise ValueError("upper endpoint must exceed 1/2")
    total = log(float(4 * K - 1))
    cuts = [Fraction(1, 2)]
    for i in range(1, bins):
        cuts.append(Fraction((exp(total * i / bins) + 1) / 4).limit_denominator(10**12))
    cuts.append(K)
    return [count_R_interval(delta, cuts[i], cuts[i + 1]) for i in range(bins)]
