"""Numerical certification of quasi-Einstein warped-product metrics.

The package evaluates curvature of explicit metric families through truncated
jet arithmetic (no symbolic algebra), checks the defining equations of
(m, rho)-quasi-Einstein structures with harmonic Weyl curvature to machine
tolerance, integrates the reduced first-order flow of the warped normal form,
and certifies the algebraic identity chain of the distinct-eigenvalue branch.

Entry points:

* :mod:`qem.catalog`        -- the certified metric families and their checks
* :mod:`qem.zeta_odes`      -- reduced flow, closed forms, reconstruction
* :mod:`qem.identity_suite` -- pointwise algebraic certificates
* :mod:`qem.cli`            -- ``qem verify | integrate | identities``
"""

__version__ = "0.1.0"

from . import errors
from .catalog import (
    DEFAULT_PARAMS,
    ENTRY_IDS,
    Box,
    CatalogEntry,
    ConstCurvChart,
    build_entry,
    certify_entry,
    sample_domain,
)
from .identity_suite import (
    SWEEP_M_VALUES,
    Triple,
    alpha_consistency,
    f_prime_distinct,
    gamma_sq,
    p_invariant,
    pair_prime,
    prop31_residual,
    sweep_report,
    sym_cubic,
    zero_fprime_c,
)
from .jets import Jet, jet_einsum, jet_space
from .qe_residual import (
    QEParams,
    codazzi_scaled,
    einstein_residual,
    harmonic_weyl_residual,
    mu_value,
    qe_residual,
    qe_residual_scaled,
    r1ii1_residuals,
    shape_operator_diag,
    w_residual,
    w_residual_scaled,
)
from .tensor_core import (
    Chart,
    CurvatureBundle,
    MetricField,
    ScalarField,
    cluster_eigenvalues,
    curvature_bundle,
    ricci_eigensystem,
)
from .zeta_odes import (
    BRANCH_LABELS,
    BranchTag,
    ZetaState,
    ZetaTrajectory,
    branch_classify,
    closed_form_match,
    closed_form_zeta2,
    double_prime_residuals,
    f_prime_of,
    harmonic_branch_check,
    integrate,
    lcf_closed_profile,
    lcf_residuals,
    reconstruct_warped,
    scalar_curvature,
    system_residuals,
    trajectory_to_csv,
    zeta_rhs,
)
