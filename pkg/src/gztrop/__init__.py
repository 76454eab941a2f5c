"""Gelfand-Zeitlin systems, scaled Ginzburg-Weinstein maps, and tropical limits.

Library layout:

- linalg: Jacobi eigensolver, upper Cholesky factor, minors
- gz: action/angle coordinates, ladder coordinates, cone membership
- poisson: Lie-Poisson bracket, gradients, Hamiltonian flows
- dualgroup: upper triangular group, corner minors, cluster charts,
  spectral ladder map, chambers, Cauchy-Binet residuals
- gwmap: the action-exponentiating diffeomorphism and its t-scalings
- tropical: words, planar networks, positive minors, tropical ladder map
- sampling / experiments / verification / reports / plots / cli:
  the seeded experiment driver and its command line
"""

__version__ = "0.1.0"

from .dualgroup import (
    ClusterPoint,
    chamber_of,
    cluster_chart,
    corner_minor,
    flaschka_ratiu,
    h_inverse,
    h_map,
    is_totally_positive,
    master_equation_residual,
)
from .errors import (
    ChartDomainError,
    ConvergenceError,
    DegenerateBorderError,
    DomainError,
    FlowDegenerationError,
    SamplingError,
    ScaleError,
    StepSizeError,
    UnsupportedSizeError,
)
from .experiments import (
    ExperimentConfig,
    bracket_limit,
    bracket_prediction,
    chambers,
    converge_action,
    converge_angle,
    tropical_estimate,
    tropical_map_experiment,
)
from .gwmap import GWResult, gamma, gw, gw_u2_closed_form
from .gz import (
    AnglePattern,
    GZPattern,
    LadderVector,
    angle_distance,
    cone_gap,
    from_ladder,
    gz_actions,
    gz_angles,
    gz_inverse,
    interlacing_gap,
    pattern_gap,
    symmetric_section_point,
    to_ladder,
)
from .linalg import (
    EigenDecomposition,
    eig_hermitian,
    hermitian_part,
    minor,
    upper_cholesky,
)
from .poisson import (
    ScalarField,
    action_field,
    angle_field,
    bracket,
    gradient,
    hamiltonian_flow,
    trace_field,
)
from .sampling import sample_h0, sample_rng
from .tropical import (
    PlanarNetwork,
    PositiveLaurentPoly,
    TropicalGZMap,
    TropicalPoly,
    Word,
    in_w_delta,
    invert_tropical,
    is_reduced,
    matrix_factorization,
    minor_polynomial,
    standard_word,
    tropical_gz_map,
    tropicalize,
)
from .verification import run_checks

__all__ = [
    "AnglePattern",
    "ChartDomainError",
    "ClusterPoint",
    "ConvergenceError",
    "DegenerateBorderError",
    "DomainError",
    "EigenDecomposition",
    "ExperimentConfig",
    "FlowDegenerationError",
    "GWResult",
    "GZPattern",
    "LadderVector",
    "PlanarNetwork",
    "PositiveLaurentPoly",
    "SamplingError",
    "ScalarField",
    "ScaleError",
    "StepSizeError",
    "TropicalGZMap",
    "TropicalPoly",
    "UnsupportedSizeError",
    "Word",
    "action_field",
    "angle_distance",
    "angle_field",
    "bracket",
    "bracket_limit",
    "bracket_prediction",
    "chamber_of",
    "chambers",
    "cluster_chart",
    "cone_gap",
    "converge_action",
    "converge_angle",
    "corner_minor",
    "eig_hermitian",
    "flaschka_ratiu",
    "from_ladder",
    "gamma",
    "gradient",
    "gw",
    "gw_u2_closed_form",
    "gz_actions",
    "gz_angles",
    "gz_inverse",
    "h_inverse",
    "h_map",
    "hamiltonian_flow",
    "hermitian_part",
    "in_w_delta",
    "interlacing_gap",
    "invert_tropical",
    "is_reduced",
    "is_totally_positive",
    "master_equation_residual",
    "matrix_factorization",
    "minor",
    "minor_polynomial",
    "pattern_gap",
    "run_checks",
    "sample_h0",
    "sample_rng",
    "standard_word",
    "symmetric_section_point",
    "to_ladder",
    "trace_field",
    "tropical_estimate",
    "tropical_gz_map",
    "tropical_map_experiment",
    "tropicalize",
    "upper_cholesky",
]
