"""Class groups of imaginary quadratic orders via binary quadratic forms."""

from ._version import __version__

from .qform import (
    FactoredDiscriminant,
    Form,
    class_number,
    cm_point,
    discriminant,
    enumerate_reduced,
    factor_discriminant,
    is_fundamental,
    is_reduced,
    kronecker,
    make_form,
    reduce_form,
    validate_discriminant,
)
from .classgroup import (
    ClassGroupSummary,
    ambiguous_forms,
    compose,
    element_order,
    exponent,
    exponent_divides,
    group_structure,
    identity,
    inverse,
    power,
)
from .boundary import (
    BoundaryLocation,
    IntervalCount,
    all_on_boundary,
    arc_transform,
    classify_location,
    count_R_interval,
    enumerate_left_boundary,
    enumerate_lower_arc,
    equidistribution_report,
    boundary_matches_two_torsion,
)
from .conductor import (
    ConductorCandidate,
    L_of,
    candidate_conductors,
    check_conductor_bound,
    conductor_divisibility_bound,
    order_class_number,
    theta,
    unit_count,
)
from .analytic import coprime_count, gamma0, totient_over_square_sum, totient_sum
from .tables import (
    DiffReport,
    ExponentTable,
    TableEntry,
    diff_against_reference,
    discriminants_with_exponent,
    prune_by_divisors,
    scan_fundamental,
)
