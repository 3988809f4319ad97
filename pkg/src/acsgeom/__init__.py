"""Numerical geometry of the space of almost complex structures on a
closed even-dimensional manifold, discretized as a weighted sample space
of independent fibers, with a verification suite for its theorems."""

from .charts import (
    CayleyCoordinate,
    acs_to_cayley,
    anticommute_project,
    cayley_to_acs,
    chart_transition,
    exp_chart,
    pullback,
    pushforward,
    random_anticommuting,
    standard_acs,
)
from .errors import (
    AnticommutationViolation,
    ConfigError,
    DegeneratePlane,
    DimensionMismatch,
    GeometryError,
    IoError,
    NotAssociated,
    SingularOperator,
)
from .fiber import FiberMetric, g_adjoint, mat_exp, mat_inv_guarded, mat_tanh_half, max_abs
from .geometry import (
    ChartField,
    acs_on_tangent,
    ambient_inner,
    ambient_omega,
    chart_inner,
    chart_omega,
    chart_origin,
    christoffel,
    curvature,
    geodesic_ambient,
    geodesic_chart,
    sectional_curvature,
    shifted,
)
from .structures import (
    AcsField,
    FieldBundle,
    FieldReport,
    MetricField,
    SampleSpace,
    SymplecticField,
    TangentField,
    associated_metric,
    load_bundle,
    orientation_marker,
    random_sample_space,
    random_tangent_field,
    save_bundle,
    standard_acs_field,
    standard_symplectic_field,
    sym_antisym_split,
    tangent_class,
    validate_acs,
    validate_associated,
    validate_orthogonal,
)
from .verify import (
    CHECK_NAMES,
    CheckReport,
    VerifyConfig,
    check_cayley,
    check_curvature_fd,
    check_geodesics,
    check_metric_structure,
    check_signature,
    check_theorem1,
    check_theorem2,
    check_totally_geodesic,
    fd_directional,
    report_document,
    run_suite,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
