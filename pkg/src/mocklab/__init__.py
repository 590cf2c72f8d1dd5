"""mocklab: high-precision order-3/5 mock theta functions, their Mordell
integrals, unary false-theta partners, and a verification engine for the
transformation identities connecting them, including the Stokes-line
decomposition of the integral vector.
"""

from .errors import (
    DomainError,
    ExtrapolationInstability,
    MocklabError,
    NonConvergenceError,
    PoleProximityError,
    PrecisionError,
)
from .identities import (
    CheckEntry,
    IdentityReport,
    SuiteReport,
    SUITES,
    check_eta_theta,
    check_growth_omega,
    check_l_vector,
    check_mf3_alternative,
    check_mf3_omega,
    check_mf3_omega_f,
    check_mf5_matrix,
    check_mf5_scalar,
    check_stokes,
    check_wronskian_suite,
    g_function,
    group_relations,
    run_suite,
    suite_report_to_json,
    wronskian_periodicity,
)
from .matrices import mixing_matrix, phase_matrix
from .modpoint import (
    BRANCH_CONVENTION,
    BranchConvention,
    ModularPoint,
    PrecisionContext,
    frac_power,
    from_alpha,
    from_tau,
    power_from_alpha,
    reference_context,
    s_transform,
)
from .mordell import (
    LVector,
    QuadratureResult,
    RayIntegrand,
    StokesDecomposition,
    integrate_ray,
    l_integral,
    l_vector,
    lateral_l_vector,
    pv_quadrature,
    pv_sum,
    stokes_decompose,
    w2_integral,
    w3_integral,
)
from .qseries import (
    MockThetaId,
    TruncatedQSeries,
    eta,
    euler_inverse_coeffs,
    eval_mock,
    k_pair,
    normalize_by_euler,
    pochhammer,
    series_expand,
    theta,
    theta2_sum_form,
    unary_x,
)

__version__ = "0.1.0"
