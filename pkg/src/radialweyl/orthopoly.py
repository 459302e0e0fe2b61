"""Laguerre polynomials, Hermite functions and the alternating Laguerre sums.

Everything that touches Laguerre values at large arguments works with the
damped quantities ``exp(-x/2) * L_n(x)``, which are bounded by one in
absolute value on ``[0, inf)``.  The three-term recurrence is homogeneous,
so it propagates the damped values unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

__all__ = [
    "MultiIndex",
    "ScaledLaguerreSequence",
    "HermiteFunction",
    "laguerre_scaled",
    "laguerre",
    "laguerre_coefficients",
    "alternating_sum_S",
    "tee_T",
    "vee_V",
    "u_U",
    "hermite_fn",
    "hermite_table",
]


@dataclass(frozen=True)
class MultiIndex:
    """A d-tuple of nonnegative integers."""

    entries: tuple[int, ...]

    def __post_init__(self):
        entries = tuple(int(a) for a in self.entries)
        if len(entries) < 1:
            raise ValueError("a multi-index needs at least one entry")
        if any(a < 0 for a in entries):
            raise ValueError(f"multi-index entries must be >= 0, got {entries}")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def of(cls, *entries: int) -> "MultiIndex":
        return cls(tuple(entries))

    @property
    def d(self) -> int:
        return len(self.entries)

    def order(self) -> int:
        return sum(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def __str__(self):
        return "(" + ",".join(str(a) for a in self.entries) + ")"


@dataclass(frozen=True)
class ScaledLaguerreSequence:
    """Damped Laguerre values ``values[n] = exp(-x/2) L_n(x)`` for n <= n_max.

    ``x`` may be a scalar or an array; ``values`` then has shape
    ``(n_max + 1,) + np.shape(x)``.
    """

    n_max: int
    x: float | np.ndarray
    values: np.ndarray

    def unscaled(self) -> np.ndarray:
        """Plain ``L_n(x)``.  Overflows for x beyond roughly 1400."""
        return self.values * np.exp(np.asarray(self.x, dtype=float) / 2.0)


def _check_nonneg_int(name, n):
    if int(n) != n or n < 0:
        raise ValueError(f"{name} must be a nonnegative integer, got {n!r}")
    return int(n)


def _check_nonneg_x(x):
    x = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(x)) or np.any(x < 0):
        raise ValueError("x must be finite and >= 0")
    return x


def _scaled_table(n_max, x):
    # No domain checks: the finite-difference checks evaluate slightly left of 0.
    x = np.asarray(x, dtype=float)
    out = np.empty((n_max + 1,) + x.shape)
    out[0] = np.exp(-x / 2.0)
    if n_max >= 1:
        out[1] = (1.0 - x) * out[0]
    for n in range(1, n_max):
        out[n + 1] = ((2 * n + 1 - x) * out[n] - n * out[n - 1]) / (n + 1)
    return out


def laguerre_scaled(n_max: int, x) -> ScaledLaguerreSequence:
    """Evaluate ``exp(-x/2) L_n(x)`` for ``n = 0..n_max``.

    Uses ``(n+1) L_{n+1} = (2n+1-x) L_n - n L_{n-1}`` started from
    ``exp(-x/2)`` and ``(1-x) exp(-x/2)``.
    """
    n_max = _check_nonneg_int("n_max", n_max)
    xa = _check_nonneg_x(x)
    values = _scaled_table(n_max, xa)
    return ScaledLaguerreSequence(n_max, x if np.ndim(x) == 0 else xa, values)


def laguerre(n: int, x):
    """Plain Laguerre polynomial ``L_n(x)``; intended for moderate x."""
    n = _check_nonneg_int("n", n)
    xa = _check_nonneg_x(x)
    return _scaled_table(n, xa)[n] * np.exp(xa / 2.0)


def laguerre_coefficients(n_max: int) -> list[list[Fraction]]:
    """Exact monomial coefficients of ``L_0 .. L_{n_max}`` from the recurrence.

    ``coeffs[n][k]`` is the coefficient of ``x**k`` in ``L_n``.
    """
    n_max = _check_nonneg_int("n_max", n_max)
    coeffs = [[Fraction(1)]]
    if n_max >= 1:
        coeffs.append([Fraction(1), Fraction(-1)])
    for n in range(1, n_max):
        cur, prev = coeffs[n], coeffs[n - 1]
        nxt = [Fraction(0)] * (n + 2)
        for k, c in enumerate(cur):
            nxt[k] += (2 * n + 1) * c
            nxt[k + 1] -= c
        for k, c in enumerate(prev):
            nxt[k] -= n * c
        coeffs.append([c / (n + 1) for c in nxt])
    return coeffs


def _alternating_prefix(table):
    # prefix[n] = sum_{k<=n} (-1)^k table[k]
    signs = (-1.0) ** np.arange(table.shape[0])
    signs = signs.reshape((-1,) + (1,) * (table.ndim - 1))
    return np.cumsum(signs * table, axis=0)


def _scaled_T_table(n_max, x):
    """Damped ``exp(-x/2) T_n(x)`` for n = 0..n_max, no domain checks."""
    lag = _scaled_table(n_max, x)
    prefix = _alternating_prefix(lag)
    out = np.empty_like(lag)
    out[0] = 0.5 * lag[0]
    if n_max >= 1:
        signs = (-1.0) ** np.arange(1, n_max + 1)
        signs = signs.reshape((-1,) + (1,) * (lag.ndim - 1))
        out[1:] = prefix[:-1] + 0.5 * signs * lag[1:]
    return out


def alternating_sum_S(n: int, x, scaled: bool = False):
    """``S_n(x) = sum_{k=0}^{n} (-1)^k L_k(x)``.

    With ``scaled=True`` the damped value ``exp(-x/2) S_n(x)`` is returned,
    which stays bounded by ``n + 1`` for every x >= 0.
    """
    n = _check_nonneg_int("n", n)
    xa = _check_nonneg_x(x)
    s = _alternating_prefix(_scaled_table(n, xa))[n]
    return s if scaled else s * np.exp(xa / 2.0)


def tee_T(n: int, x, scaled: bool = False):
    """``T_n(x) = sum_{k<n} (-1)^k L_k(x) + (-1)^n L_n(x) / 2``."""
    n = _check_nonneg_int("n", n)
    xa = _check_nonneg_x(x)
    t = _scaled_T_table(n, xa)[n]
    return t if scaled else t * np.exp(xa / 2.0)


def _order_and_dim(alpha, d):
    if isinstance(alpha, MultiIndex):
        if d is not None and d != alpha.d:
            raise ValueError(f"d={d} does not match multi-index length {alpha.d}")
        return alpha.order(), alpha.d
    if d is None:
        raise ValueError("pass a MultiIndex, or an integer order together with d")
    order = _check_nonneg_int("order", alpha)
    if int(d) != d or d < 1:
        raise ValueError(f"d must be a positive integer, got {d!r}")
    return order, int(d)


def _vee(order, d, x):
    t = _scaled_T_table(order + d - 1, x)
    return 4.0 * sum(comb(d - 1, k) * t[order + k] for k in range(d))


def _u(order, d, x):
    lag = _scaled_table(order + d - 1, x)
    return sum(comb(d - 1, k) * (-1.0) ** (order + k) * lag[order + k] for k in range(d))


def vee_V(alpha, x, d: int | None = None):
    """``V_alpha(x) = 4 exp(-x/2) sum_k binom(d-1, k) T_{|alpha|+k}(x)``.

    ``alpha`` is a :class:`MultiIndex`, or an integer order with ``d`` given
    separately (the value only depends on ``|alpha|`` and ``d``).
    """
    order, d = _order_and_dim(alpha, d)
    return _vee(order, d, _check_nonneg_x(x))


def u_U(alpha, x, d: int | None = None):
    """``U_alpha(x) = exp(-x/2) sum_k binom(d-1, k) (-1)^{|alpha|+k} L_{|alpha|+k}(x)``."""
    order, d = _order_and_dim(alpha, d)
    return _u(order, d, _check_nonneg_x(x))


@dataclass(frozen=True)
class HermiteFunction:
    """The L2-normalized Hermite function of degree n, callable on arrays."""

    n: int

    def __post_init__(self):
        _check_nonneg_int("n", self.n)

    def __call__(self, x):
        return hermite_fn(self.n, x)


def hermite_table(n_max: int, x) -> np.ndarray:
    """Hermite functions ``H_0 .. H_{n_max}`` at x, shape ``(n_max+1,) + x.shape``.

    Normalized recurrence
    ``H_{n+1} = sqrt(2/(n+1)) x H_n - sqrt(n/(n+1)) H_{n-1}``
    with ``H_0 = pi**-0.25 exp(-x**2/2)``.
    """
    n_max = _check_nonneg_int("n_max", n_max)
    x = np.asarray(x, dtype=float)
    out = np.empty((n_max + 1,) + x.shape)
    out[0] = np.pi ** -0.25 * np.exp(-x * x / 2.0)
    if n_max >= 1:
        out[1] = np.sqrt(2.0) * x * out[0]
    for n in range(1, n_max):
        out[n + 1] = np.sqrt(2.0 / (n + 1)) * x * out[n] - np.sqrt(n / (n + 1)) * out[n - 1]
    return out


def hermite_fn(n: int, x):
    return hermite_table(n, x)[n]
