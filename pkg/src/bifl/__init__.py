"""bifl: stationary Born-Infeld / Maxwell-Born field solvers and identity checks."""

from .fields import (
    MB,
    MBI,
    AuxPoint,
    FieldPoint,
    InfeasiblePointError,
    ModelMismatchError,
    ModelParams,
    bh_dot,
    constitutive,
    d_of_eb,
    e_of_bd,
    ed_dot,
    energy_density,
    h_of_bd,
    h_of_eb,
    lagrangian_density,
    scaling_derivative_density,
)
from .grid import (
    EdgeField,
    FaceField,
    FieldState,
    GridSpec,
    ScalarGrid,
    SourcePlacementError,
    SourceSpec,
    average_to_centers,
    deposit_sources,
    discrete_curl_e2f,
    discrete_curl_f2e,
    discrete_div,
    discrete_div_faces,
    discrete_grad,
    loop_current,
    total_energy,
)

__version__ = "0.1.0"
