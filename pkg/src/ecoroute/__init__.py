"""Energy-optimal routing for plug-in hybrid electric vehicles."""

from .energy import (
    DriveCycleTable,
    LinkCostBreakdown,
    VehicleEnergyParams,
    cdf_path_cost,
    link_mode_costs,
    optimal_pt_allocation,
    split_path_cost,
)
from .graph import (
    Link,
    NetworkGraph,
    Path,
    PathEnumerationOverflow,
    TrafficMode,
    UnknownNodeError,
    travel_time,
)
from .lp import LinearProgram, MilpProblem, SolveResult, solve_lp, solve_milp
from .preprocess import (
    PreprocessReport,
    SegmentRecord,
    build_graph,
    classify_segment_mode,
)
from .routing import (
    OdRouteDistribution,
    RouteSolution,
    UnreachableDestinationError,
    cdf_oracle,
    cdf_route_hybrid_lp,
    crptc_oracle,
    crptc_route_milp,
    expected_actual_cost,
    shortest_time_path,
)

__all__ = [
    "DriveCycleTable",
    "Link",
    "LinkCostBreakdown",
    "LinearProgram",
    "MilpProblem",
    "NetworkGraph",
    "OdRouteDistribution",
    "Path",
    "PathEnumerationOverflow",
    "PreprocessReport",
    "RouteSolution",
    "SegmentRecord",
    "SolveResult",
    "TrafficMode",
    "UnknownNodeError",
    "UnreachableDestinationError",
    "VehicleEnergyParams",
    "build_graph",
    "cdf_oracle",
    "cdf_path_cost",
    "cdf_route_hybrid_lp",
    "classify_segment_mode",
    "crptc_oracle",
    "crptc_route_milp",
    "expected_actual_cost",
    "link_mode_costs",
    "optimal_pt_allocation",
    "shortest_time_path",
    "solve_lp",
    "solve_milp",
    "split_path_cost",
    "travel_time",
]

__version__ = "0.1.0"
