"""Tropicalization of parametrized rational curves over Puiseux-type fields."""

from .puiseux import INF, PuiseuxSeries, ps_arith, ps_inverse, ps_valuation
from .trees import (
    MarkedMetricTree,
    ParametrizedTropCurve,
    TropicalDegree,
    check_balancing,
    leg_distance,
    validate_tree,
)
from .tropicalize import (
    ClusterFamily,
    CurveInput,
    cluster_tree,
    corresponding_curve,
    image_membership,
    trop_image_point,
)
from .enumeration import (
    CountResult,
    IncidenceConstraint,
    count_curves,
    enumerate_types,
    kontsevich_oracle,
)

__version__ = "0.1.0"
