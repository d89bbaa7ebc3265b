"""Hamiltonian stationary Lagrangian tori in R^4 from their spectral data."""

from .frame import FRAME, AmbientFrame, exp_J
from .immersion import (
    SurfaceSample,
    TorusImmersion,
    bandwidth_grid,
    base_translate,
    build_immersion,
    evaluate_A_B,
    evaluate_chi1,
    evaluate_f,
    evaluate_f_chi,
    evaluate_f_z,
    evaluate_f_zzbar,
    immersion_from_config,
    sample_grid,
)
from .lattice import (
    EmptyFrequencySet,
    FrequencySet,
    Lattice,
    MaslovClass,
    MaslovIndices,
    dual_basis,
    enumerate_maslov_frequencies,
    lagrangian_angle,
    maslov_indices,
    real_pairing,
)
from .spectral import (
    CurveReport,
    RootCollision,
    SpectralPoint,
    SpectralRoots,
    curve_report,
    evaluate_p,
    iota,
    iota_inverse,
    phi,
    projective_distance,
    roots_from_frequencies,
    solve_vandermonde,
    theta_infinity,
    theta_zero,
    vandermonde,
)
from .flows import (
    FlowDirection,
    QuaternionCoords,
    area_derivative,
    flow_apply,
    flow_trajectory,
    g0_act,
    hamiltonian_projection,
    hamiltonian_test,
    hodge_pairing_oracle,
    quaternions_to_t,
    t_to_quaternions,
)
from .meshio import export_mesh, read_csv4d
from .verification import (
    VerificationReport,
    area_check,
    area_closed_form,
    branch_bound,
    branch_scan,
    check_angle,
    check_conformal,
    check_lagrangian,
    mean_curvature_identity,
    pkf_build_from_chi,
    pkf_build_from_recursion,
    willmore_check,
)

__version__ = "0.1.0"
