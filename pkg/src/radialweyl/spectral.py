"""Eigenvalues of radial Weyl operators and the explicit lower bound.

For a radial symbol ``F = Phi(|x|^2 + |xi|^2)`` the semiclassical Weyl
operator is diagonal in the (scaled) tensor Hermite basis, with eigenvalue

    2^-d [ Phi_h(0) V(0) + 1/2 int_0^inf Phi_h'(t/2) V(t) dt ],

where ``Phi_h(t) = Phi(h t)`` and ``V`` depends on the multi-index only
through its order.  The lower bound is ``B(h) = int_0^inf Phi(h s) e^-s ds``.

Substituting ``t = 2u`` turns the eigenvalue integral into
``int_0^inf Phi_h'(u) V(2u) du``; ``V(2u)`` already carries ``e^-u``, so the
Gauss-Laguerre rule is applied through its exp-premultiplied weights.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .orthopoly import MultiIndex, _vee
from .quadrature import QuadratureError, integrate_semi_infinite
from .symbols import RadialProfile, RadialSymbol, scale_profile

__all__ = [
    "SpectralTable",
    "BoundExpansion",
    "DegenerateFitError",
    "eigenvalue",
    "eigenvalue_of",
    "lower_bound",
    "verify_theorem",
    "bound_expansion",
    "series_bound",
    "DEFAULT_REL_TOL",
    "DEFAULT_ABS_TOL",
]

DEFAULT_REL_TOL = 1e-10
DEFAULT_ABS_TOL = 1e-9

FLAG_EXTENDED = "extended_domain"
FLAG_HYPOTHESES = "hypotheses_not_met"
FLAG_VIOLATION = "violation"
FLAG_NOT_MONOTONE = "spectrum_not_monotone"


class DegenerateFitError(ValueError):
    pass


def _node_count(order, d):
    return max(64, order + d + 16)


def _eigenvalue_scaled(profile_h, order, d, rel_tol):
    # profile_h is already Phi_h; V(0) = 2^d so the first term is Phi_h(0).
    dphi = profile_h.deriv

    def integrand(u):
        return dphi(u) * _vee(order, d, 2.0 * u)

    integral, _ = integrate_semi_infinite(
        integrand, rel_tol=rel_tol, n_nodes=_node_count(order, d),
        breakpoints=profile_h.breakpoints,
    )
    return float(profile_h.value_at_zero + integral / 2.0 ** d)


def eigenvalue(
    profile: RadialProfile, alpha_order: int, d: int, h: float, rel_tol: float = DEFAULT_REL_TOL
) -> float:
    """Eigenvalue of ``Op_h(Phi(|x|^2+|xi|^2))`` on Hermite states of order ``alpha_order``.

    Raises :class:`~radialweyl.quadrature.QuadratureError` if the integral
    does not converge.
    """
    if int(alpha_order) != alpha_order or alpha_order < 0:
        raise ValueError(f"alpha_order must be a nonnegative integer, got {alpha_order!r}")
    if int(d) != d or d < 1:
        raise ValueError(f"d must be a positive integer, got {d!r}")
    return _eigenvalue_scaled(scale_profile(profile, h), int(alpha_order), int(d), rel_tol)


def eigenvalue_of(profile: RadialProfile, alpha: MultiIndex, h: float, rel_tol: float = DEFAULT_REL_TOL) -> float:
    """Same as :func:`eigenvalue`, keyed by a full multi-index."""
    return eigenvalue(profile, alpha.order(), alpha.d, h, rel_tol)


def lower_bound(profile: RadialProfile, h: float, rel_tol: float = DEFAULT_REL_TOL) -> float:
    """``B(h) = (1/h) int_0^inf Phi(t) e^{-t/h} dt``, computed as ``int Phi(h s) e^-s ds``."""
    if not h > 0:
        raise ValueError(f"h must be positive, got {h!r}")
    phi, phi0 = profile.eval, profile.value_at_zero

    # Phi(0) is split off exactly; this also keeps B(h) - Phi(0) free of
    # cancellation at small h.
    def integrand(s):
        return (phi(h * s) - phi0) * np.exp(-s)

    value, _ = integrate_semi_infinite(
        integrand, rel_tol=rel_tol, breakpoints=tuple(p / h for p in profile.breakpoints)
    )
    return float(phi0 + value)


def series_bound(profile: RadialProfile, h: float, terms: int = 40) -> float:
    """Partial sum ``sum_k Phi^(k)(0) h^k`` of the small-h expansion of ``B(h)``.

    Only meaningful for profiles with a convergent Taylor series at 0 and
    small enough ``h``.
    """
    if profile.taylor is None:
        raise ValueError(f"profile {profile.label} has no Taylor data")
    return math.fsum(c * h ** k for k, c in enumerate(profile.taylor(terms)))


@dataclass
class SpectralTable:
    """Eigenvalues by order for one ``(profile, d, h)`` and the bound ``B(h)``."""

    symbol: RadialSymbol
    entries: dict[int, float]
    bound: float
    min_margin: float
    argmin_order: int
    hypotheses_met: bool
    abs_tol: float
    monotone: bool
    flags: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.min_margin >= -self.abs_tol

    def margins(self) -> dict[int, float]:
        return {n: lam - self.bound for n, lam in self.entries.items()}

    def eigenvalue_for(self, alpha: MultiIndex) -> float:
        return self.entries[alpha.order()]


def _spectral_table(profile, d, h, alpha_max, rel_tol, abs_tol):
    profile_h = scale_profile(profile, h)
    entries = {n: _eigenvalue_scaled(profile_h, n, d, rel_tol) for n in range(alpha_max + 1)}
    bound = lower_bound(profile, h, rel_tol)
    margins = {n: lam - bound for n, lam in entries.items()}
    argmin = min(margins, key=margins.get)
    lams = [entries[n] for n in range(alpha_max + 1)]
    # Observation only: report, never assert.
    monotone = all(b >= a - abs_tol for a, b in zip(lams, lams[1:]))
    flags = []
    if not profile.bounded:
        flags.append(FLAG_EXTENDED)
    if not profile.nondecreasing:
        flags.append(FLAG_HYPOTHESES)
    if not monotone:
        flags.append(FLAG_NOT_MONOTONE)
    if profile.nondecreasing and margins[argmin] < -abs_tol:
        flags.append(FLAG_VIOLATION)
    return SpectralTable(
        RadialSymbol(profile, d, h), entries, bound, margins[argmin], argmin,
        profile.nondecreasing, abs_tol, monotone, flags,
    )


def verify_theorem(
    profile: RadialProfile,
    d: int,
    h_grid: Sequence[float],
    alpha_max: int,
    rel_tol: float = DEFAULT_REL_TOL,
    abs_tol: float = DEFAULT_ABS_TOL,
) -> list[SpectralTable]:
    """Check ``lambda_alpha(h) >= B(h)`` for all orders up to ``alpha_max``.

    Profiles that are not nondecreasing still get a table, flagged
    ``hypotheses_not_met``; unbounded ones are flagged ``extended_domain``.
    """
    if int(alpha_max) != alpha_max or alpha_max < 0:
        raise ValueError(f"alpha_max must be a nonnegative integer, got {alpha_max!r}")
    return [_spectral_table(profile, int(d), float(h), int(alpha_max), rel_tol, abs_tol) for h in h_grid]


@dataclass
class BoundExpansion:
    h_values: list[float]
    bound_values: list[float]
    remainders: list[float]
    fitted_order: float | None
    predicted_order: int | None
    leading_coefficient: float | None
    expected_coefficient: float | None
    value_at_zero: float
    series_values: list[float] | None = None

    @property
    def flat(self) -> bool:
        return self.fitted_order is None


def _fit_log_remainder(h, log_r, with_order):
    # log R = log c + p log h + sum_j b_j h^j; corrections absorb the next terms.
    n_corr = max(0, min(2, len(h) - 2 - int(with_order)))
    cols = [np.ones_like(h)]
    if with_order:
        cols.append(np.log(h))
    cols += [h ** j for j in range(1, n_corr + 1)]
    coef, *_ = np.linalg.lstsq(np.column_stack(cols), log_r, rcond=None)
    return coef


def bound_expansion(
    profile: RadialProfile, h_list: Sequence[float], rel_tol: float = DEFAULT_REL_TOL
) -> BoundExpansion:
    """Fit the small-h behaviour ``B(h) - Phi(0) ~ Phi^(m)(0) h^m``.

    The fitted order is the slope of ``log |B(h) - Phi(0)|`` against
    ``log h`` in a regression that also carries ``h`` and ``h^2`` terms for
    the next orders of the expansion.  The leading coefficient is the
    ``h -> 0`` extrapolation of ``(B(h) - Phi(0)) / h^m``.
    """
    h = np.array(sorted(float(x) for x in h_list), dtype=float)
    if np.any(h <= 0):
        raise ValueError("h values must be positive")
    bounds = [lower_bound(profile, float(x), rel_tol) for x in h]
    phi0 = profile.value_at_zero
    rem = np.array(bounds) - phi0
    series = None
    if profile.taylor is not None:
        series = [series_bound(profile, float(x)) for x in h]

    scale = max(1.0, abs(phi0))
    if np.all(np.abs(rem) <= 10 * rel_tol * scale):
        return BoundExpansion(list(h), bounds, list(rem), None, profile.flat_order_m, None,
                              profile.deriv_m_at_zero, phi0, series)
    usable = np.abs(rem) > 10 * rel_tol * scale
    if usable.sum() < 3:
        raise DegenerateFitError("need at least 3 values of h with a resolvable remainder")
    hu, ru = h[usable], rem[usable]
    if np.any(np.sign(ru) != np.sign(ru[0])):
        raise DegenerateFitError("remainder changes sign over the h range; choose smaller h")
    log_r = np.log(np.abs(ru))
    fitted = float(_fit_log_remainder(hu, log_r, True)[1])

    m = profile.flat_order_m
    lead = None
    if m is not None:
        coef = _fit_log_remainder(hu, log_r - m * np.log(hu), False)
        lead = float(np.sign(ru[0]) * np.exp(coef[0]))
    return BoundExpansion(list(h), bounds, list(rem), fitted, m, lead,
                          profile.deriv_m_at_zero, phi0, series)
