"""Cherenkov radiation in dispersive, rotationally symmetric anisotropic media.

The package computes propagating electromagnetic modes, the Cherenkov
emission poles of a uniformly moving charge, the radiated intensity profile,
and the wave-cone versus group-cone geometry, including slow-light media
where the two cones split by orders of magnitude.
"""

__version__ = "0.1.0"

from .errors import NumericalError, ValidationError
from .media import (
    CircularDecomposition,
    EITLambda,
    EITParams,
    IsotropicConstant,
    IsotropicDispersive,
    MediumModel,
    Tabulated,
    background_epsilon,
    c_light,
    circular_components,
    circular_to_tensor,
    eit_epsilon_plus,
    eit_linewidth,
    epsilon_tensor,
    in_plane_eigenvalues,
    lossless_components,
    validity_window,
)
from .modes import (
    Mode,
    fresnel_det,
    fresnel_matrix,
    group_velocity,
    modes_at,
    weight_mu,
)
from .kinematics import (
    ChargeState,
    CherenkovPole,
    ConeGeometry,
    absorption_curvature,
    cone_geometry,
    find_poles,
    geometric_construction,
    im_k_perp,
    radial_velocity,
    radial_velocity_fd,
    threshold_beta,
)
from .field import (
    FieldMap,
    PoleCache,
    ProfileParams,
    field_integral,
    gaussian_profile,
    intensity_map,
    profile_params,
    resonance_profile,
)
from .scenario import (
    Numerics,
    RunManifest,
    Scenario,
    parse_scenario,
    preset_path,
    run_sweep,
)
