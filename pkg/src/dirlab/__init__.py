"""Direction sets, sphere-chart coverage, and slope densities of finite
point configurations, with energy and stopping-time tooling for the
measures they carry."""

from .errors import (
    DegeneratePair,
    DepthExhausted,
    DirlabError,
    FormatError,
    MixedMode,
    NotSeparated,
    PreconditionFailed,
    SizeLimit,
    VerticalPair,
    WrongDimension,
)
from .geometry import (
    DIRECTION_RESOLUTION,
    DUPLICATE_RESOLUTION,
    DirectionKey,
    PointSet,
    SlopeVector,
    canonical_direction,
    collinearity_rank,
    infer_mode,
    read_point_set,
    slope_of_pair,
    write_point_set,
)
from .generators import (
    CANTOR_CATALOG,
    IfsSystem,
    LatticeSpec,
    cantor_line_system,
    garnett_system,
    hyperplane_sample,
    ifs_approximant,
    lattice_set,
    lipschitz_graph_sample,
    product_cantor,
)
from .directions import (
    CoverageGrid,
    DirectionCensus,
    PpsReport,
    SeparatedSubset,
    distinct_directions,
    pps_check,
    primitive_count,
    separated_subset,
    sphere_coverage,
    sphere_coverage_sweep,
)
from .fitting import FitResult, fit_power_law
from .measure import (
    AdaptabilityReport,
    CubeSplit,
    SlopeBandReport,
    SlopeDensityField,
    WeightedPointSet,
    default_energy_bound,
    discrete_frostman,
    energy_integral,
    frostman_constant,
    is_adaptable,
    orient_split_for_slopes,
    slope_band_sweep,
    slope_chart_pair_mass,
    slope_density,
    stopping_time_split,
    uniform_weights,
)
from .experiments import (
    ExperimentReport,
    default_config_path,
    run_adaptable_directions,
    run_all,
    run_garnett_decay,
    run_scaling_lattice,
    run_slope_band,
    write_reports,
)
from .experiments import TOOL_VERSION as __version__

__all__ = [
    "AdaptabilityReport",
    "CANTOR_CATALOG",
    "CoverageGrid",
    "CubeSplit",
    "DIRECTION_RESOLUTION",
    "DUPLICATE_RESOLUTION",
    "DegeneratePair",
    "DepthExhausted",
    "DirectionCensus",
    "DirectionKey",
    "DirlabError",
    "ExperimentReport",
    "FitResult",
    "FormatError",
    "IfsSystem",
    "LatticeSpec",
    "MixedMode",
    "NotSeparated",
    "PointSet",
    "PpsReport",
    "PreconditionFailed",
    "SeparatedSubset",
    "SizeLimit",
    "SlopeBandReport",
    "SlopeDensityField",
    "SlopeVector",
    "VerticalPair",
    "WeightedPointSet",
    "WrongDimension",
    "canonical_direction",
    "cantor_line_system",
    "collinearity_rank",
    "default_config_path",
    "default_energy_bound",
    "discrete_frostman",
    "distinct_directions",
    "energy_integral",
    "fit_power_law",
    "frostman_constant",
    "garnett_system",
    "hyperplane_sample",
    "ifs_approximant",
    "infer_mode",
    "is_adaptable",
    "lattice_set",
    "lipschitz_graph_sample",
    "orient_split_for_slopes",
    "pps_check",
    "primitive_count",
    "product_cantor",
    "read_point_set",
    "run_adaptable_directions",
    "run_all",
    "run_garnett_decay",
    "run_scaling_lattice",
    "run_slope_band",
    "separated_subset",
    "slope_band_sweep",
    "slope_chart_pair_mass",
    "slope_density",
    "slope_of_pair",
    "sphere_coverage",
    "sphere_coverage_sweep",
    "stopping_time_split",
    "uniform_weights",
    "write_point_set",
    "write_reports",
]
