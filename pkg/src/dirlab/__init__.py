"""Finite-field direction sets, product sets and McConnel-type classification checks."""

__version__ = "0.1.0"

from .field import FieldCtx, FieldSpec, arith, build_field, gf  # noqa: E402
from .sets import (  # noqa: E402
    DoublingReport,
    MulSet,
    all_subgroups,
    coset,
    coset_decompose,
    doubling_report,
    inverse_set,
    product_set,
    subgroup_by_index,
    triple_quotient,
)
from .directions import (  # noqa: E402
    DirectionSet,
    FuncTable,
    PointSet,
    directions_of_function,
    directions_of_points,
    image_ratio_set,
)
from .linearized import (  # noqa: E402
    DensePoly,
    FrobeniusMonomial,
    LinPoly,
    detect_frobenius_monomial,
    detect_linearized,
    h_identity_check,
    lin_eval,
    poly_mul,
    reciprocal_transform,
)
from .search import (  # noqa: E402
    corollary_census,
    enumerate_quotient_functions,
    expected_solution_set,
    small_doubling_sampler,
    verify_directions_theorem,
    verify_mcconnel_extended,
)
