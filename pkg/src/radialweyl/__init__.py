"""Exact spectra and lower bounds for Weyl operators with radial symbols."""

from .orthopoly import MultiIndex, alternating_sum_S, hermite_fn, laguerre_scaled, tee_T, u_U, vee_V
from .quadrature import QuadratureError, gauss_laguerre, gauss_legendre, integrate_adaptive
from .spectral import bound_expansion, eigenvalue, lower_bound, verify_theorem
from .symbols import RadialProfile, RadialSymbol, builtin_profile, scale_profile

__version__ = "0.1.0"

__all__ = [
    "MultiIndex",
    "alternating_sum_S",
    "hermite_fn",
    "laguerre_scaled",
    "tee_T",
    "u_U",
    "vee_V",
    "QuadratureError",
    "gauss_laguerre",
    "gauss_legendre",
    "integrate_adaptive",
    "bound_expansion",
    "eigenvalue",
    "lower_bound",
    "verify_theorem",
    "RadialProfile",
    "RadialSymbol",
    "builtin_profile",
    "scale_profile",
]
