"""Representation counting and local analysis for cubic forms
L1(x1,x2,x3) Q1(x1,x2,x3) + L2(x4,x5,x6) Q2(x4,x5,x6) + a7 x7^3."""

from .errors import (
    DegenerateBlockError,
    DomainError,
    InvalidFormError,
    ResourceLimitError,
)
from .forms import (
    BlockInvariants,
    Classification,
    CubicForm,
    LinearSpace,
    NormalForm,
    adjoint_matrix,
    block_invariants,
    classify,
    content_decomposition,
    delta,
    form_from_dict,
    form_to_dict,
    linear_spaces,
    load_form,
    transform_block,
)
from .counting import (
    MainTermReport,
    chi,
    count_representations,
    count_zeros,
    delta_constants,
    union_space_count,
    value_histogram,
)
from .expsums import (
    SeriesEstimate,
    s3,
    s_block,
    singular_series,
    singular_term,
)
from .density import (
    DensityResult,
    SlabEstimate,
    density_ladder,
    singular_integral,
    slab_volume,
)
from .local import (
    BlockLocalData,
    LocalData,
    block_local_case,
    congruence_solvable,
    gamma_report,
    gammas,
    local_data,
    local_report,
)
from .audits import (
    GrowthAudit,
    growth_audit,
    power_congruence_audit,
    power_congruence_count,
    second_moment,
    second_moment_audit,
    special_surface_count,
    surface_audit,
)
from .checks import CheckResult, verify
from .experiment import P_SCHEDULE, PredictionReport, predict

__version__ = "0.1.0"

__all__ = [
    "BlockInvariants",
    "BlockLocalData",
    "CheckResult",
    "Classification",
    "CubicForm",
    "DegenerateBlockError",
    "DensityResult",
    "DomainError",
    "GrowthAudit",
    "InvalidFormError",
    "LinearSpace",
    "LocalData",
    "MainTermReport",
    "NormalForm",
    "P_SCHEDULE",
    "PredictionReport",
    "ResourceLimitError",
    "SeriesEstimate",
    "SlabEstimate",
    "adjoint_matrix",
    "block_invariants",
    "block_local_case",
    "chi",
    "classify",
    "congruence_solvable",
    "content_decomposition",
    "count_representations",
    "count_zeros",
    "delta",
    "delta_constants",
    "density_ladder",
    "form_from_dict",
    "form_to_dict",
    "gamma_report",
    "gammas",
    "growth_audit",
    "linear_spaces",
    "load_form",
    "local_data",
    "local_report",
    "power_congruence_audit",
    "power_congruence_count",
    "predict",
    "s3",
    "s_block",
    "second_moment",
    "second_moment_audit",
    "singular_integral",
    "singular_series",
    "singular_term",
    "slab_volume",
    "special_surface_count",
    "surface_audit",
    "transform_block",
    "union_space_count",
    "value_histogram",
    "verify",
]
