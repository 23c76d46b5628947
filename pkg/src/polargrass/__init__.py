"""Line polar Grassmann codes of orthogonal type over odd-order fields.

The package builds the evaluation code of the line orthogonal Grassmannian
embedded in the second exterior power, computes its parameters, and verifies
the point and line counts that determine the minimum distance by independent
brute-force enumeration at desk scale.
"""

from .code import (
    CodeParams,
    Codeword,
    PolarCode,
    build_code,
    code_parameters,
    codeword_from_form,
    export_code,
    form_from_message,
    message_from_form,
    min_distance_certified,
    min_distance_exact,
    parse_code,
    random_alternating_form,
    standard_code,
    weight_of_message,
)
from .counting import (
    case1_equation_counts,
    case1_line_count,
    case4_line_count_bound,
    case_line_count,
    check_eigenvector_bound,
    closed_form_census,
    delta_bound_check,
    even_orbit_closed,
    kappa_closed,
    line_count_from_census,
    line_count_objective,
    max_singular_isotropic_lines,
    objective_grid_argmax,
    residue_constants,
    run_checks,
    verify_case_maxima,
    verify_census_all,
    verify_grid_maxima,
    verify_line_count_identity,
    verify_line_types,
    verify_orbit_counts,
)
from .errors import (
    BudgetExceeded,
    Case4NoClosedForm,
    CounterexampleFound,
    DimensionMismatch,
    EvenCharacteristic,
    InadmissibleParams,
    IoError,
    NonIntegerResult,
    NotOnQuadric,
    NotPrime,
    PolargrassError,
    RadicalMismatch,
    RankDeficient,
    SingularPoint,
    TableMismatch,
    TypeNotInTable,
    ZeroMessage,
    ZeroVector,
)
from .field import FieldCtx, field_ctx
from .forms import (
    AlternatingForm,
    BlockProfile,
    QuadraticSpace,
    admissible_pairs,
    build_M,
    build_S,
    canonical_form,
    check_admissible,
    classify_internal_external,
    form_profile,
    orbit_counts,
    point_square_class,
    projective_points,
    quadric_isometry,
    radical_split,
    standard_space,
    transport_form,
    witt_index,
)
from .geometry import (
    CensusRecord,
    LineSet,
    empirical_census,
    enumerate_singular_lines,
    isotropic_line_count,
    line_type,
    line_type_census,
    lines_through,
    quadric_points,
    residue_class,
    residue_classes,
    tau,
    tau_values,
)
from .matrix import MatrixFq, Subspace, format_matrix_text, parse_matrix_text

__version__ = "0.1.0"
