"""Fourier analysis on 2-step nilpotent Lie groups."""

from .group_model import (
    GroupElement,
    GroupSpec,
    GroupSpecError,
    apply_field,
    builtin_group,
    group_multiply,
    load_group_spec,
    sigma,
    u_lambda,
)
from .spectral import SpectralData, generic_rank, spectral_decompose
from .hermite import (
    CoeffVector,
    QuadratureRule,
    gauss_hermite_rule,
    gauss_legendre_rule,
    hermite_eval,
    hermite_table,
    ladder_apply,
    norm_bound,
    rescaled_hermite_eval,
    trapezoid_rule,
)
from .frequency_space import (
    FrequencyPoint,
    approach_sequence,
    embed,
    integrate_ghat,
    integrate_mu_j,
    is_member,
    rho_E,
    unembed,
)
from .kernel import (
    KernelPoint1D,
    bessel_j,
    delta_hat0_apply,
    delta_hat_apply,
    f_coeff,
    h_coeff,
    kernel_k,
    kernel_w,
    kernel_w_1d,
    ktilde,
    ktilde_synthesis,
    theta_kernel,
)
from .transform import (
    OperatorMatrix,
    SampledFunction,
    TransformQuadrature,
    central_limit_check,
    dirac_lemma_check,
    fourier_coeff,
    fourier_operator_matrix,
    gcal_lambda,
    group_convolve,
    inversion_at_origin,
    plancherel_check,
    separable,
    sublaplacian,
    sublaplacian_check,
)

__version__ = "0.1.0"
