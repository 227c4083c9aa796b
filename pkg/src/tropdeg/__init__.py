"""tropdeg: chip-firing, admissible multidegrees, and divisor ranks on graphs.

Core modules are pure and exact-arithmetic; the ``service`` subpackage wraps
them in a FastAPI app, and ``cli`` is a thin client over the same handlers.
"""

from .chains import (
    AdmissibleMultidegree,
    ChainStructure,
    SubdividedGraph,
    admissible_from_divisor,
    apply_twists,
    concentrate,
    induced_divisor,
    is_concentrated,
    subdivide,
    twist,
    twist_equivalent,
)
from .graphs import (
    Divisor,
    MultiGraph,
    TwistVector,
    apply_firings,
    build_graph,
    canonical_divisor,
    fire,
    is_v_reduced,
    linear_equiv,
    rank,
    rank_at_least,
    reduce_divisor,
)
from .metric import (
    MetricDivisor,
    MetricGraph,
    MetricPoint,
    PLFunction,
    equiv_decompose,
    metric_linear_equiv,
    metric_rank,
    move_chips_edge_reduced,
    pl_divisor,
    reduce_metric,
)
from .twistgraph import (
    ConcentratedFamily,
    NodeDivisor,
    NodePoint,
    TwistCore,
    chain_point_divisor,
    dimension_bound_twist,
    enumerate_twist_core,
    in_twist_core,
    minimal_path,
    node_divisor,
)

__all__ = [
    "AdmissibleMultidegree",
    "ChainStructure",
    "ConcentratedFamily",
    "Divisor",
    "MetricDivisor",
    "MetricGraph",
    "MetricPoint",
    "MultiGraph",
    "NodeDivisor",
    "NodePoint",
    "PLFunction",
    "SubdividedGraph",
    "TwistCore",
    "TwistVector",
    "admissible_from_divisor",
    "apply_firings",
    "apply_twists",
    "build_graph",
    "canonical_divisor",
    "chain_point_divisor",
    "concentrate",
    "dimension_bound_twist",
    "enumerate_twist_core",
    "equiv_decompose",
    "fire",
    "in_twist_core",
    "induced_divisor",
    "is_concentrated",
    "is_v_reduced",
    "linear_equiv",
    "metric_linear_equiv",
    "metric_rank",
    "minimal_path",
    "move_chips_edge_reduced",
    "node_divisor",
    "pl_divisor",
    "rank",
    "rank_at_least",
    "reduce_divisor",
    "reduce_metric",
    "subdivide",
    "twist",
    "twist_equivalent",
]

__version__ = "0.1.0"
