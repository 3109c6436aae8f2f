"""Controlled metric type spaces, rough convergence, and theorem checking
over finite point sets."""

from .fileformat import (
    LoadError,
    dump_space,
    load_space,
    parse_real,
    parse_sequence_literal,
    sequence_literal,
)
from .rough import (
    CriticalRoughness,
    RoughLimitSet,
    cluster_points,
    critical_roughness,
    derived_set,
    is_rough_limit,
    rough_limit_set,
)
from .sequences import (
    BoundednessReport,
    EpSequence,
    arithmetic_subsequence,
    boundedness,
    is_cauchy,
    is_convergent,
    limsup_distance,
    tail_values,
)
from .spaces import (
    Ball,
    ControlledSpace,
    InvalidSpaceError,
    ShapeError,
    SpaceSpec,
    TOLERANCE,
    ValidationResult,
    Violation,
    ball,
    build_space,
    diameter,
    paper_example_spec,
    restrict,
    validate_axioms,
)
from .theorems import (
    FuzzConfig,
    FuzzSummary,
    TheoremId,
    TheoremReport,
    check_ball_sandwich,
    check_bounded_implies_rough,
    check_cluster_ball,
    check_derived_set,
    check_diameter_bound,
    check_limitset_sequence,
    check_rough_implies_bounded,
    check_shadowing,
    check_subsequence,
    default_r_grid,
    fuzz,
    random_sequence,
    random_space,
    render_summary,
    rerun,
    run_all,
)

__version__ = "0.1.0"

__all__ = [
    "Ball",
    "BoundednessReport",
    "ControlledSpace",
    "CriticalRoughness",
    "EpSequence",
    "FuzzConfig",
    "FuzzSummary",
    "InvalidSpaceError",
    "LoadError",
    "RoughLimitSet",
    "ShapeError",
    "SpaceSpec",
    "TOLERANCE",
    "TheoremId",
    "TheoremReport",
    "ValidationResult",
    "Violation",
    "arithmetic_subsequence",
    "ball",
    "boundedness",
    "build_space",
    "check_ball_sandwich",
    "check_bounded_implies_rough",
    "check_cluster_ball",
    "check_derived_set",
    "check_diameter_bound",
    "check_limitset_sequence",
    "check_rough_implies_bounded",
    "check_shadowing",
    "check_subsequence",
    "cluster_points",
    "critical_roughness",
    "default_r_grid",
    "derived_set",
    "diameter",
    "dump_space",
    "fuzz",
    "is_cauchy",
    "is_convergent",
    "is_rough_limit",
    "limsup_distance",
    "load_space",
    "paper_example_spec",
    "parse_real",
    "parse_sequence_literal",
    "random_sequence",
    "random_space",
    "render_summary",
    "rerun",
    "restrict",
    "rough_limit_set",
    "run_all",
    "sequence_literal",
    "tail_values",
    "validate_axioms",
]
