"""Brute-force Wigner transforms and Weyl matrix elements by direct quadrature.

This path never uses the Laguerre closed forms: Wigner functions are
computed from their defining ``t``-integral and matrix elements by a
tensor Gauss-Legendre grid over a truncated phase-space box.  It exists to
certify the closed-form spectral path at small dimension and order.

Matrix elements use the semiclassical Hermite states
``u_alpha^h(x) = h^{-d/4} u_alpha(x / sqrt(h))``, which diagonalize
``Op_h`` of a radial symbol; at ``h = 1`` they are the ordinary Hermite
products.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .orthopoly import MultiIndex, _scaled_table, hermite_table
from .quadrature import _legendre_reference
from .symbols import RadialProfile

__all__ = [
    "PhasePoint",
    "WaveFunction",
    "OracleTruncationError",
    "OracleReport",
    "PairResult",
    "TranslationResult",
    "hermite_state",
    "translate",
    "support_radius",
    "wigner",
    "wigner_closed_form",
    "pairing",
    "matrix_element",
    "matrix_element_with_error",
    "translation_check",
    "oracle_report",
    "multi_indices",
]

DEFAULT_GRID = {1: 160, 2: 48}
SUPPORT_TOL = 1e-15


class OracleTruncationError(RuntimeError):
    """A test function is not negligible on the boundary of its box."""


@dataclass(frozen=True)
class PhasePoint:
    z: tuple[float, ...]
    zeta: tuple[float, ...]

    def __post_init__(self):
        z = tuple(float(v) for v in np.atleast_1d(self.z))
        zeta = tuple(float(v) for v in np.atleast_1d(self.zeta))
        if len(z) != len(zeta):
            raise ValueError("z and zeta must have equal lengths")
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "zeta", zeta)

    @property
    def d(self) -> int:
        return len(self.z)


@dataclass(frozen=True)
class WaveFunction:
    """A product function ``f(x) = prod_j factors[j](x_j)`` on ``R^d``.

    ``center`` and ``momentum`` locate it in phase space; outside
    ``|x_j - center_j| <= support`` every factor is below the truncation
    tolerance.  Calling it expects points with coordinates on the last axis.
    """

    factors: tuple[Callable, ...]
    center: tuple[float, ...]
    momentum: tuple[float, ...]
    support: float
    label: str = ""

    @property
    def d(self) -> int:
        return len(self.factors)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = self.factors[0](x[..., 0])
        for j in range(1, self.d):
            out = out * self.factors[j](x[..., j])
        return out


@lru_cache(maxsize=None)
def support_radius(n_max: int, tol: float = SUPPORT_TOL) -> float:
    """Smallest R with ``|H_n(x)| <= tol`` for all ``|x| >= R`` and ``n <= n_max``."""
    x = np.arange(0.0, 60.0, 0.01)
    big = np.max(np.abs(hermite_table(n_max, x)), axis=0) > tol
    return float(x[np.nonzero(big)[0][-1] + 1])


def _hermite_factor(n, h):
    scale = h ** -0.25
    root = math.sqrt(h)
    return lambda x: scale * hermite_table(n, np.asarray(x, float) / root)[n]


def hermite_state(alpha, h: float = 1.0) -> WaveFunction:
    """The scaled tensor Hermite function ``u_alpha^h``."""
    alpha = alpha if isinstance(alpha, MultiIndex) else MultiIndex(tuple(alpha))
    factors = tuple(_hermite_factor(a, h) for a in alpha)
    return WaveFunction(
        factors, (0.0,) * alpha.d, (0.0,) * alpha.d,
        math.sqrt(h) * support_radius(max(alpha)), f"u{alpha}",
    )


def translate(f: WaveFunction, x0, xi0, h: float) -> WaveFunction:
    """``(T f)(u) = exp(i (xi0/h).(u - x0)) f(u - x0)``."""
    x0 = np.atleast_1d(np.asarray(x0, float))
    xi0 = np.atleast_1d(np.asarray(xi0, float))
    if len(x0) != f.d or len(xi0) != f.d:
        raise ValueError("translation vectors must match the dimension")

    def shifted(fj, a, b):
        return lambda u: np.exp(1j * (b / h) * (np.asarray(u, float) - a)) * fj(np.asarray(u, float) - a)

    return WaveFunction(
        tuple(shifted(fj, a, b) for fj, a, b in zip(f.factors, x0, xi0)),
        tuple(c + a for c, a in zip(f.center, x0)),
        tuple(p + b for p, b in zip(f.momentum, xi0)),
        f.support, f"T{f.label}",
    )


def _check_truncation(f: WaveFunction, tol):
    for j, fj in enumerate(f.factors):
        c = f.center[j]
        edge = np.abs(fj(np.array([c - f.support, c + f.support])))
        if np.any(edge > tol):
            raise OracleTruncationError(
                f"{f.label or 'function'} is {edge.max():.3g} at the edge of its box "
                f"(axis {j}, half-width {f.support:g}); enlarge the support"
            )


def wigner_closed_form(alpha, x, xi, h: float = 1.0):
    """Laguerre closed form of the Wigner function of ``u_alpha^h`` with itself."""
    alpha = alpha if isinstance(alpha, MultiIndex) else MultiIndex(tuple(alpha))
    x = np.asarray(x, float) / math.sqrt(h)
    xi = np.asarray(xi, float) / math.sqrt(h)
    out = 2.0 ** alpha.d * (-1.0) ** alpha.order()
    for j, a in enumerate(alpha):
        r = x[..., j] ** 2 + xi[..., j] ** 2
        # exp(-r) L_a(2r) is the damped Laguerre value at 2r.
        out = out * _scaled_table(a, 2.0 * r)[a]
    return out


def _t_window(cf, cg, z, support):
    # Where f(z + t/2) and g(z - t/2) are both inside their supports.
    lo = np.maximum(2.0 * (cf - z) - 2.0 * support, 2.0 * (z - cg) - 2.0 * support)
    hi = np.minimum(2.0 * (cf - z) + 2.0 * support, 2.0 * (z - cg) + 2.0 * support)
    return lo, np.maximum(hi, lo)


def _t_points(support, zeta_radius, h, n):
    # Over the t-window the phase t*zeta/h sweeps 4*support*zeta_radius/h;
    # the exactness degree must cover that plus the envelope's bandwidth.
    return max(n, int(math.ceil(2.0 * support * zeta_radius / h)) + 40)


def _wigner_grid_1d(f, g, cf, cg, support, z, zeta, h, n_t):
    """W[i, j] = int exp(-i t zeta_j / h) f(z_i + t/2) conj(g(z_i - t/2)) dt.

    One t-window ``cf - cg +- 2 support`` serves every z, so the transform
    is a single matrix product.
    """
    ref_x, ref_w = _legendre_reference(n_t)
    t = (cf - cg) + 2.0 * support * ref_x
    w = 2.0 * support * ref_w
    a = f(z[:, None] + t[None, :] / 2.0) * np.conj(g(z[:, None] - t[None, :] / 2.0))
    e = w[:, None] * np.exp(-1j * np.outer(t, zeta) / h)
    return a @ e


def wigner(f, g, Z: PhasePoint, h: float = 1.0, n_points: int | None = None, support: float | None = None):
    """``H_h(f, g, Z) = int exp(-i t.zeta/h) f(z + t/2) conj(g(z - t/2)) dt``.

    ``f`` and ``g`` are :class:`WaveFunction` objects (or callables on points
    with coordinates on the last axis, in which case ``support`` is
    required).  Supported for ``d <= 2``.
    """
    d = Z.d
    if d > 2:
        raise ValueError("the brute-force Wigner oracle is limited to d <= 2")
    n = n_points or DEFAULT_GRID[d]
    fs, cf = _support_and_center(f, d, support)
    gs, cg = _support_and_center(g, d, support)
    s = max(fs, gs)
    z = np.array(Z.z)
    zeta = np.array(Z.zeta)
    ref_x, ref_w = _legendre_reference(n)
    axes, weights = [], []
    for j in range(d):
        lo, hi = _t_window(cf[j], cg[j], z[j], s)
        if hi <= lo:
            return 0.0 + 0.0j
        half, mid = 0.5 * (hi - lo), 0.5 * (hi + lo)
        axes.append(mid + half * ref_x)
        weights.append(half * ref_w)
    t = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)
    w = np.prod(np.stack(np.meshgrid(*weights, indexing="ij"), axis=-1), axis=-1)
    vals = f(z + t / 2.0) * np.conj(g(z - t / 2.0)) * np.exp(-1j * (t @ zeta) / h)
    return complex(np.sum(w * vals))


def _support_and_center(f, d, support):
    if isinstance(f, WaveFunction):
        if f.d != d:
            raise ValueError(f"function dimension {f.d} does not match phase point dimension {d}")
        _check_truncation(f, 1e3 * SUPPORT_TOL)
        return f.support, np.array(f.center)
    if support is None:
        raise ValueError("pass support= for plain callables")
    return float(support), np.zeros(d)


def _box(f: WaveFunction, g: WaveFunction, h):
    # Wigner functions of Hermite-type states decay like exp(-|Z - Z_c|^2 / h),
    # twice as fast (in the exponent) as the states themselves.
    cz = 0.5 * (np.array(f.center) + np.array(g.center))
    cp = 0.5 * (np.array(f.momentum) + np.array(g.momentum))
    s = max(f.support, g.support)
    return cz, cp, s, s / math.sqrt(2.0) + math.sqrt(h)


def _pairing_1d(symbol, f, g, h, n):
    cz, cp, s, r = _box(f, g, h)
    ref_x, ref_w = _legendre_reference(n)
    z = cz[0] + r * ref_x
    zeta = cp[0] + r * ref_x
    w = r * ref_w
    W = _wigner_grid_1d(f.factors[0], g.factors[0], f.center[0], g.center[0], s, z, zeta, h,
                        _t_points(s, r, h, n))
    F = symbol(z[:, None, None], zeta[None, :, None])
    return complex(w @ (F * W) @ w) / (2.0 * math.pi * h)


def _pairing_2d(symbol, f, g, h, n):
    # Product states have a product Wigner function, so only the 4-d
    # phase-space sum is done jointly, in row blocks.
    cz, cp, s, r = _box(f, g, h)
    ref_x, ref_w = _legendre_reference(n)
    n_t = _t_points(s, r, h, n)
    grids, flat = [], []
    for j in range(2):
        z = cz[j] + r * ref_x
        zeta = cp[j] + r * ref_x
        W = _wigner_grid_1d(f.factors[j], g.factors[j], f.center[j], g.center[j], s, z, zeta, h, n_t)
        w = r * ref_w
        grids.append((np.repeat(z, n), np.tile(zeta, n)))
        flat.append((np.outer(w, w) * W).ravel())
    z1, p1 = grids[0]
    z2, p2 = grids[1]
    total = 0.0 + 0.0j
    block = max(1, 2_000_000 // len(z2))
    for start in range(0, len(z1), block):
        sl = slice(start, start + block)
        x = np.stack(np.broadcast_arrays(z1[sl, None], z2[None, :]), axis=-1)
        xi = np.stack(np.broadcast_arrays(p1[sl, None], p2[None, :]), axis=-1)
        total += flat[0][sl] @ symbol(x, xi) @ flat[1]
    return complex(total) / (2.0 * math.pi * h) ** 2


def pairing(symbol: Callable, f: WaveFunction, g: WaveFunction, h: float, n_points: int | None = None) -> complex:
    """``<Op_h(symbol) f, g> = (2 pi h)^-d int symbol(Z) H_h(f, g, Z) dZ``.

    ``symbol(x, xi)`` receives arrays with the ``d`` coordinates on the last
    axis.  ``f`` and ``g`` must be product functions (``d <= 2``).
    """
    if f.d != g.d:
        raise ValueError("f and g must have the same dimension")
    d = f.d
    if d > 2:
        raise ValueError("the brute-force oracle is limited to d <= 2")
    _check_truncation(f, 1e3 * SUPPORT_TOL)
    _check_truncation(g, 1e3 * SUPPORT_TOL)
    n = n_points or DEFAULT_GRID[d]
    return _pairing_1d(symbol, f, g, h, n) if d == 1 else _pairing_2d(symbol, f, g, h, n)


def _radial_symbol(profile):
    return lambda x, xi: profile.eval(np.sum(x * x, axis=-1) + np.sum(xi * xi, axis=-1))


def _as_index(alpha, d):
    alpha = alpha if isinstance(alpha, MultiIndex) else MultiIndex(tuple(np.atleast_1d(alpha)))
    if alpha.d != d:
        raise ValueError(f"multi-index {alpha} does not have length d={d}")
    return alpha


def matrix_element_with_error(profile, alpha, beta, d: int, h: float, n_points: int | None = None):
    """Matrix element and an error estimate from a second, 1.5x finer grid."""
    alpha, beta = _as_index(alpha, d), _as_index(beta, d)
    n = n_points or DEFAULT_GRID[d]
    f, g = hermite_state(alpha, h), hermite_state(beta, h)
    sym = _radial_symbol(profile)
    fine = pairing(sym, f, g, h, n + n // 2)
    coarse = pairing(sym, f, g, h, n)
    return fine, abs(fine - coarse)


def matrix_element(profile: RadialProfile, alpha, beta, d: int, h: float, n_points: int | None = None) -> complex:
    """``<Op_h(F) u_alpha^h, u_beta^h>`` for ``F = Phi(|x|^2 + |xi|^2)``."""
    alpha, beta = _as_index(alpha, d), _as_index(beta, d)
    return pairing(_radial_symbol(profile), hermite_state(alpha, h), hermite_state(beta, h), h, n_points)


@dataclass
class TranslationResult:
    x0: tuple[float, ...]
    xi0: tuple[float, ...]
    f_index: MultiIndex
    g_index: MultiIndex
    lhs: complex
    rhs: complex
    delta: float


def translation_check(
    profile: RadialProfile, x0, xi0, f_index, g_index, h: float = 1.0, n_points: int | None = None
) -> TranslationResult:
    """Compare ``<Op_h(tau F) f, g>`` with ``<Op_h(F) T f, T g>``.

    ``tau F(x, xi) = F(x + x0, xi + xi0)``; ``f``, ``g`` are Hermite states.
    Both sides are computed by separate quadratures.
    """
    x0 = tuple(float(v) for v in np.atleast_1d(x0))
    xi0 = tuple(float(v) for v in np.atleast_1d(xi0))
    d = len(x0)
    f_index, g_index = _as_index(f_index, d), _as_index(g_index, d)
    f, g = hermite_state(f_index, h), hermite_state(g_index, h)
    a, b = np.array(x0), np.array(xi0)

    def shifted(x, xi):
        return profile.eval(np.sum((x + a) ** 2, axis=-1) + np.sum((xi + b) ** 2, axis=-1))

    lhs = pairing(shifted, f, g, h, n_points)
    rhs = pairing(_radial_symbol(profile), translate(f, a, b, h), translate(g, a, b, h), h, n_points)
    return TranslationResult(x0, xi0, f_index, g_index, lhs, rhs, abs(lhs - rhs))


def multi_indices(d: int, max_order: int) -> list[MultiIndex]:
    """All multi-indices of length d with order <= max_order, by order then lexicographic."""
    out = [MultiIndex(a) for a in itertools.product(range(max_order + 1), repeat=d) if sum(a) <= max_order]
    return sorted(out, key=lambda m: (m.order(), tuple(-v for v in m.entries)))


@dataclass
class PairResult:
    alpha: MultiIndex
    beta: MultiIndex
    value: complex
    error_estimate: float
    closed_form: float
    delta: float
    error: str | None = None


@dataclass
class OracleReport:
    profile: str
    d: int
    h: float
    pairs: list[PairResult] = field(default_factory=list)
    translations: list[TranslationResult] = field(default_factory=list)

    def diagonal(self):
        return [p for p in self.pairs if p.alpha == p.beta and p.error is None]

    def off_diagonal(self):
        return [p for p in self.pairs if p.alpha != p.beta and p.error is None]

    @property
    def max_diagonal_delta(self) -> float:
        return max((p.delta for p in self.diagonal()), default=0.0)

    @property
    def max_off_diagonal(self) -> float:
        return max((abs(p.value) for p in self.off_diagonal()), default=0.0)

    @property
    def max_translation_delta(self) -> float:
        return max((t.delta for t in self.translations), default=0.0)


def oracle_report(
    profile: RadialProfile,
    d: int,
    h: float,
    max_order: int = 4,
    n_points: int | None = None,
    translations: Sequence[tuple] = (),
    translation_indices: Sequence[int] = (0, 1),
    rel_tol: float = 1e-10,
) -> OracleReport:
    """Brute-force matrix over all states of order <= max_order, compared with
    the closed-form eigenvalues (diagonal) and zero (off-diagonal).

    Truncation failures are recorded per pair rather than aborting the run.
    """
    from .spectral import eigenvalue

    report = OracleReport(profile.label, d, h)
    states = multi_indices(d, max_order)
    closed = {n: eigenvalue(profile, n, d, h, rel_tol) for n in range(max_order + 1)}
    for alpha in states:
        for beta in states:
            expected = closed[alpha.order()] if alpha == beta else 0.0
            try:
                value, err = matrix_element_with_error(profile, alpha, beta, d, h, n_points)
            except OracleTruncationError as exc:
                report.pairs.append(PairResult(alpha, beta, complex("nan"), math.inf, expected, math.inf, str(exc)))
                continue
            report.pairs.append(PairResult(alpha, beta, value, err, expected, abs(value - expected)))
    if d == 1:
        for x0, xi0 in translations:
            for fi in translation_indices:
                for gi in translation_indices:
                    report.translations.append(
                        translation_check(profile, [x0], [xi0], [fi], [gi], h, n_points)
                    )
    return report
