"""Dyadic-content integrals, potentials, and inequality reports on the unit square.

The package evaluates set functions built from dyadic-square covers, the
monotone (layer-cake) integrals they induce, fractional maximal and Riesz
operators under zero extension, and resolution-scan reports for the
shift-invariant inequalities connecting them.
"""

from .choquet import (
    StepFunction,
    choquet_integral,
    choquet_norm,
    distribution_function,
    lebesgue_integral,
    power_integral,
    power_integral_routes,
)
from .content import (
    ContentParams,
    CoverSolution,
    ball_cover_upper,
    dyadic_content,
    dyadic_optimal_cover,
    lebesgue_area,
)
from .domains import (
    BallDomain,
    Domain,
    PolygonDomain,
    PuncturedBallDomain,
    SquareDomain,
    domain_label,
    make_domain,
    reference_average,
    representation_ratio,
)
from .errors import (
    ChoqError,
    ConsistencyError,
    IncompleteCoverError,
    InputError,
    ParameterError,
    ResolutionError,
    SingularityError,
    ViolationError,
)
from .grid import (
    MAX_LEVEL,
    Ball,
    Difference,
    DyadicGrid,
    DyadicMask,
    GridFunction,
    Polygon,
    build_grid,
    fd_gradmag,
    rasterize_shape,
    read_pbm,
    write_function_csv,
    write_pbm,
)
from .inequalities import (
    InequalityParams,
    REPORT_COLUMNS,
    RatioReport,
    adams_report,
    best_shift,
    max_ratio_by_level,
    maximal_sweep,
    poincare_report,
    sharpness_scan,
    sobolev_report,
    worker_count,
    write_reports_csv,
    write_reports_json,
    zero_boundary_report,
)
from .operators import (
    MaximalParams,
    RIESZ_SELF_FACTOR,
    SplitBoundReport,
    fractional_maximal,
    hedberg_bound,
    maximal_at,
    radial_tail_integral,
    riesz_ball_sum,
    riesz_direct,
    riesz_potential,
    split_inside_constant,
)
from .presets import (
    BumpPreset,
    LinearPreset,
    PowerPreset,
    TrigPreset,
    compact_family,
    eval_preset,
    preset_label,
    report_family,
    sweep_family,
)

__version__ = "0.1.0"

__all__ = [
    "MAX_LEVEL",
    "Ball",
    "BallDomain",
    "BumpPreset",
    "ChoqError",
    "ConsistencyError",
    "ContentParams",
    "CoverSolution",
    "Difference",
    "Domain",
    "DyadicGrid",
    "DyadicMask",
    "GridFunction",
    "IncompleteCoverError",
    "InequalityParams",
    "REPORT_COLUMNS",
    "InputError",
    "LinearPreset",
    "MaximalParams",
    "RIESZ_SELF_FACTOR",
    "ParameterError",
    "PolygonDomain",
    "Polygon",
    "PowerPreset",
    "PuncturedBallDomain",
    "RatioReport",
    "ResolutionError",
    "SingularityError",
    "SplitBoundReport",
    "SquareDomain",
    "StepFunction",
    "TrigPreset",
    "ViolationError",
    "adams_report",
    "ball_cover_upper",
    "best_shift",
    "build_grid",
    "choquet_integral",
    "choquet_norm",
    "compact_family",
    "distribution_function",
    "domain_label",
    "dyadic_content",
    "dyadic_optimal_cover",
    "eval_preset",
    "fd_gradmag",
    "fractional_maximal",
    "hedberg_bound",
    "lebesgue_area",
    "lebesgue_integral",
    "make_domain",
    "max_ratio_by_level",
    "maximal_at",
    "maximal_sweep",
    "poincare_report",
    "power_integral",
    "power_integral_routes",
    "preset_label",
    "radial_tail_integral",
    "rasterize_shape",
    "read_pbm",
    "reference_average",
    "report_family",
    "representation_ratio",
    "riesz_ball_sum",
    "riesz_direct",
    "riesz_potential",
    "sharpness_scan",
    "sobolev_report",
    "worker_count",
    "split_inside_constant",
    "sweep_family",
    "write_function_csv",
    "write_pbm",
    "write_reports_csv",
    "write_reports_json",
    "zero_boundary_report",
]
