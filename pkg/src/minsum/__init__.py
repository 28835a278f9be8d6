"""Exact characterization of the points that can minimize a finite sum
of convex functions, each known only through one minimizer and its
strong-convexity / smoothness constants."""

from .geometry import (
    BOUNDARY,
    Ball,
    CoincidentPointsError,
    DimensionMismatchError,
    HalfSpace,
    INSIDE,
    OUTSIDE,
    Verdict,
    classify,
    eps_for,
)
from .interpolation import (
    ClassParams,
    Triplet,
    WitnessValues,
    check_interpolation,
    geometric_ball,
    minimizer_condition_margin,
    pair_slack,
    witness_values,
)
from .membership import (
    KNOWN_ONE_NONSMOOTH,
    KNOWN_SMOOTH,
    KnownFunction,
    M_SMOOTH,
    ONE_NONSMOOTH,
    PREDICATE_NAMES,
    RegionRaster,
    Scenario,
    Summand,
    TWO_NONSMOOTH_BOUNDED,
    TWO_SMOOTH,
    UnsupportedPatternError,
    WitnessRecoveryError,
    evaluate,
    focal_point,
    member_m_one_nonsmooth,
    member_m_smooth,
    member_smooth_nonsmooth,
    member_two_nonsmooth_bounded,
    member_two_smooth,
    member_with_known,
    member_with_known_one_nonsmooth,
    min_bound_B,
    rasterize_region,
    route,
    witness_gradients,
)
from .bounds import (
    BoundReport,
    ball_bound_baseline,
    ball_bound_one_nonsmooth,
    ball_bound_smooth,
    focal_distance_bound,
    scenario_bound_reports,
    smallest_enclosing_ball,
)
from .oracle import (
    CrossCheckReport,
    FeasibilityProblem,
    ProjectionResult,
    QuadraticInstance,
    cross_check,
    feasibility_by_projection,
    necessity_sweep,
    qp_min_norm_gradient,
    qp_min_norm_gradient_solution,
    random_smooth_scenario,
    random_two_nonsmooth_scenario,
    sample_quadratic_instance,
)
from .serialize import (
    ScenarioFormatError,
    load_scenario,
    raster_to_csv_text,
    raster_to_svg_text,
    save_scenario,
    scenario_from_json,
    scenario_to_json,
    verdict_to_dict,
)

__version__ = "0.1.0"

__all__ = [
    "BOUNDARY",
    "Ball",
    "BoundReport",
    "ClassParams",
    "CoincidentPointsError",
    "CrossCheckReport",
    "DimensionMismatchError",
    "FeasibilityProblem",
    "HalfSpace",
    "INSIDE",
    "KNOWN_ONE_NONSMOOTH",
    "KNOWN_SMOOTH",
    "KnownFunction",
    "M_SMOOTH",
    "ONE_NONSMOOTH",
    "OUTSIDE",
    "PREDICATE_NAMES",
    "ProjectionResult",
    "QuadraticInstance",
    "RegionRaster",
    "Scenario",
    "ScenarioFormatError",
    "Summand",
    "TWO_NONSMOOTH_BOUNDED",
    "TWO_SMOOTH",
    "Triplet",
    "UnsupportedPatternError",
    "Verdict",
    "WitnessRecoveryError",
    "WitnessValues",
    "ball_bound_baseline",
    "ball_bound_one_nonsmooth",
    "ball_bound_smooth",
    "check_interpolation",
    "classify",
    "cross_check",
    "eps_for",
    "evaluate",
    "feasibility_by_projection",
    "focal_distance_bound",
    "focal_point",
    "geometric_ball",
    "load_scenario",
    "member_m_one_nonsmooth",
    "member_m_smooth",
    "member_smooth_nonsmooth",
    "member_two_nonsmooth_bounded",
    "member_two_smooth",
    "member_with_known",
    "member_with_known_one_nonsmooth",
    "min_bound_B",
    "minimizer_condition_margin",
    "necessity_sweep",
    "pair_slack",
    "qp_min_norm_gradient",
    "qp_min_norm_gradient_solution",
    "random_smooth_scenario",
    "random_two_nonsmooth_scenario",
    "rasterize_region",
    "raster_to_csv_text",
    "raster_to_svg_text",
    "route",
    "sample_quadratic_instance",
    "save_scenario",
    "scenario_bound_reports",
    "scenario_from_json",
    "scenario_to_json",
    "smallest_enclosing_ball",
    "verdict_to_dict",
    "witness_gradients",
    "witness_values",
]
