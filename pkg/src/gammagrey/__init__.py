"""Numerics for incomplete-gamma grey noise.

Mixing law of the variance variable R, characteristic and Laplace
functionals, T- and S-transforms, Donsker's delta, fractional kernels,
Γ-grey Brownian motion and the Γ-grey Ornstein-Uhlenbeck process.

Hot kernels are compiled with numba when available. Set
``GAMMAGREY_DISABLE_NUMBA=1`` (or call :func:`set_backend`) to use the
pure numpy implementations.
"""

from ._accel import backend, set_backend
from .bounds import appendix_bound, bound_chain, chain_holds, integrability_bound, uniform_C_rho
from .donsker import (
    expectation_delta,
    expectation_delta_a,
    mixture_delta_oracle,
    mixture_density_p,
    t_transform_delta,
    t_transform_delta_a,
)
from .errors import (
    ConvergenceError,
    DegenerateDensityError,
    DomainError,
    GammaGreyError,
    GridMismatchError,
    PoleError,
    SeriesNotConverged,
)
from .fracops import FractionalOrder, IndicatorKernel, gram, kernel_norm_sq, m_plus_apply, normalization_K
from .functionals import (
    bernstein_mixture,
    char_functional,
    laplace_functional,
    s_transform_linear,
    t_transform_exp,
)
from .ggbm import PathSample, char_fn_ggbm, noise_s_transform, s_transform_ggbm, simulate_ggbm
from .mixing import GreyParams, cdf_R, density_f, laplace_of_density, mean_R, sample_R
from .ou import OuParams, h_kernel, h_norm_sq, ou_char_fn, simulate_ou
from .pairing import ComplexTestFunction, GridFunction, bilinear, in_U_theta, quad_form_S
from .quad import QuadSpec, integrate_singular
from .specfun import kummer_1f1, tricomi_psi, upper_incomplete_gamma

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
