"""Numerical checks of the Laguerre/Hermite identities behind the eigenvalue formula.

Each check returns an :class:`IdentityResult` with the worst error found and
where it occurred.  Identities involving Laguerre values at large arguments
are compared in damped form (both sides multiplied by ``exp(-X/2)``).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Callable

import numpy as np

from .orthopoly import (
    _scaled_T_table,
    _scaled_table,
    _u,
    _vee,
    _alternating_prefix,
    hermite_table,
    laguerre_coefficients,
)
from .quadrature import gauss_legendre

__all__ = [
    "IdentityResult",
    "IDENTITIES",
    "FD_STEP",
    "FD2_STEP",
    "convolution_identity",
    "convolution_exact",
    "derivative_recurrence",
    "t_derivative_identity",
    "t_prime_identity",
    "s_positivity",
    "t_lower_bound",
    "v_envelope",
    "u_minus_v_prime",
    "hermite_eigenrelation",
    "hermite_orthonormality",
    "run_identities",
]

FD_STEP = 5e-4
FD2_STEP = 7e-3


@dataclass
class IdentityResult:
    name: str
    max_error: float
    tolerance: float
    worst_case: str

    @property
    def passed(self) -> bool:
        return self.max_error <= self.tolerance


def _central(f, x, step=FD_STEP):
    # Fourth-order five-point first derivative.
    return (f(x - 2 * step) - 8.0 * f(x - step) + 8.0 * f(x + step) - f(x + 2 * step)) / (12.0 * step)


def _second(f, x, step=FD2_STEP):
    # Sixth-order seven-point second derivative.
    c = (2.0, -27.0, 270.0, -490.0, 270.0, -27.0, 2.0)
    return sum(ci * f(x + (k - 3) * step) for k, ci in enumerate(c)) / (180.0 * step ** 2)


def _worst(errors, labels):
    i = int(np.argmax(errors))
    return float(errors[i]), labels[i]


def convolution_identity(max_index=15, xs=(1.0, 5.0, 10.0, 20.0, 40.0), tol=1e-9, n_points=40):
    """int_0^X L_a(t) L_b(X-t) dt = L_{a+b}(X) - L_{a+b+1}(X), damped by exp(-X/2).

    After damping the integrand is a product of two damped Laguerre values,
    a polynomial of degree a+b times exp(-X/2), so Gauss-Legendre with
    ``n_points >= (2 max_index + 1) / 2`` is exact up to rounding.
    """
    errors, labels = [], []
    for X in xs:
        rule = gauss_legendre(n_points, 0.0, X)
        left = _scaled_table(max_index, rule.nodes)
        right = _scaled_table(max_index, X - rule.nodes)
        target = _scaled_table(2 * max_index + 1, np.array(X))
        for a in range(max_index + 1):
            for b in range(max_index + 1):
                lhs = np.dot(rule.weights, left[a] * right[b])
                rhs = target[a + b] - target[a + b + 1]
                errors.append(abs(lhs - rhs))
                labels.append(f"a={a} b={b} X={X:g}")
    err, where = _worst(errors, labels)
    return IdentityResult("convolution", err, tol, where)


def _poly_mul(p, q):
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return out


def _poly_at(p, x):
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def convolution_exact(max_index=15, xs=(1, 5, 10, 20, 40), tol=1e-9):
    """The undamped convolution identity in exact rational arithmetic.

    Both sides are evaluated on rational coefficients, so the reported
    absolute error is that of the identity itself, free of rounding at
    arguments where ``|L_n(X)|`` is of order ``1e7``.
    """
    coeffs = laguerre_coefficients(2 * max_index + 1)
    worst, where = 0.0, "none"
    for X in xs:
        X = Fraction(X)
        # L_b(X - t) as a polynomial in t.
        shifted = []
        for b in range(max_index + 1):
            q = [Fraction(0)] * (b + 1)
            for k, c in enumerate(coeffs[b]):
                for j in range(k + 1):
                    q[j] += c * comb(k, j) * X ** (k - j) * (-1) ** j
            shifted.append(q)
        values = [_poly_at(c, X) for c in coeffs]
        for a in range(max_index + 1):
            for b in range(max_index + 1):
                prod = _poly_mul(coeffs[a], shifted[b])
                lhs = sum(c * X ** (k + 1) / (k + 1) for k, c in enumerate(prod))
                err = abs(float(lhs - (values[a + b] - values[a + b + 1])))
                if err > worst or where == "none":
                    worst, where = err, f"a={a} b={b} X={X}"
    return IdentityResult("convolution_exact", worst, tol, where)


def derivative_recurrence(n_max=40, tol=0.0):
    """L'_{k+1} = L'_k - L_k on exact rational coefficients."""
    coeffs = laguerre_coefficients(n_max)

    def deriv(c):
        return [k * c[k] for k in range(1, len(c))]

    worst, where = 0.0, "none"
    for k in range(n_max):
        lhs = deriv(coeffs[k + 1])
        rhs_a, rhs_b = deriv(coeffs[k]), coeffs[k]
        for j, v in enumerate(lhs):
            r = (rhs_a[j] if j < len(rhs_a) else 0) - (rhs_b[j] if j < len(rhs_b) else 0)
            if abs(float(v - r)) > worst:
                worst, where = abs(float(v - r)), f"k={k} coefficient {j}"
    return IdentityResult("derivative_recurrence", worst, tol, where)


def t_derivative_identity(n_max=30, xs=None, tol=1e-9):
    """d/dt [exp(-t/2) T_n(t)] = (-1)^{n+1}/4 L_n(t) exp(-t/2), by five-point differences."""
    xs = np.linspace(0.0, 50.0, 501) if xs is None else np.asarray(xs, float)
    fd = _central(lambda x: _scaled_T_table(n_max, x), xs)
    lag = _scaled_table(n_max, xs)
    signs = ((-1.0) ** (np.arange(n_max + 1) + 1) / 4.0)[:, None]
    err = np.abs(fd - signs * lag) / np.maximum(1.0, np.abs(signs * lag))
    n, i = np.unravel_index(np.argmax(err), err.shape)
    return IdentityResult("t_derivative", float(err[n, i]), tol, f"n={n} t={xs[i]:g}")


def t_prime_identity(n_max=30, xs=None, tol=1e-9):
    """T_n'(X) = S_{n-1}(X) / 2, compared after damping by exp(-X/2)."""
    xs = np.linspace(0.0, 50.0, 501) if xs is None else np.asarray(xs, float)
    damped_t = _scaled_T_table(n_max, xs)
    # exp(-X/2) T' = (exp(-X/2) T)' + (exp(-X/2) T) / 2
    lhs = _central(lambda x: _scaled_T_table(n_max, x), xs) + 0.5 * damped_t
    s = _alternating_prefix(_scaled_table(n_max, xs))
    rhs = 0.5 * s[:-1]
    err = np.abs(lhs[1:] - rhs) / np.maximum(1.0, np.abs(rhs))
    n, i = np.unravel_index(np.argmax(err), err.shape)
    return IdentityResult("t_prime_half_s", float(err[n, i]), tol, f"n={n + 1} X={xs[i]:g}")


def _positivity_grid():
    return np.linspace(0.0, 200.0, 400)


def s_positivity(n_max=60, xs=None, tol=1e-12):
    """S_n(X) >= 0; the reported error is the largest negative excursion."""
    xs = _positivity_grid() if xs is None else np.asarray(xs, float)
    s = _alternating_prefix(_scaled_table(n_max, xs)) * np.exp(xs / 2.0)
    n, i = np.unravel_index(np.argmin(s), s.shape)
    return IdentityResult("s_positivity", max(0.0, -float(s[n, i])), tol, f"n={n} X={xs[i]:g}")


def t_lower_bound(n_max=60, xs=None, tol=1e-12):
    """T_n(X) >= 1/2."""
    xs = _positivity_grid() if xs is None else np.asarray(xs, float)
    t = _scaled_T_table(n_max, xs) * np.exp(xs / 2.0) - 0.5
    n, i = np.unravel_index(np.argmin(t), t.shape)
    return IdentityResult("t_lower_bound", max(0.0, -float(t[n, i])), tol, f"n={n} X={xs[i]:g}")


def v_envelope(d_max=3, order_max=30, xs=None, tol=1e-12):
    """V_alpha(X) >= 2^d exp(-X/2)."""
    xs = _positivity_grid() if xs is None else np.asarray(xs, float)
    worst, where = -np.inf, "none"
    for d in range(1, d_max + 1):
        for n in range(order_max + 1):
            gap = 2.0 ** d * np.exp(-xs / 2.0) - _vee(n, d, xs)
            i = int(np.argmax(gap))
            if gap[i] > worst:
                worst, where = float(gap[i]), f"d={d} |alpha|={n} X={xs[i]:g}"
    return IdentityResult("v_envelope", max(0.0, worst), tol, where)


def u_minus_v_prime(d_max=3, order_max=10, xs=None, tol=1e-9):
    """U_alpha(X) = -V_alpha'(X), by five-point differences."""
    xs = np.linspace(0.0, 50.0, 501) if xs is None else np.asarray(xs, float)
    worst, where = 0.0, "none"
    for d in range(1, d_max + 1):
        for n in range(order_max + 1):
            err = np.abs(_u(n, d, xs) + _central(lambda x: _vee(n, d, x), xs))
            i = int(np.argmax(err))
            if err[i] > worst:
                worst, where = float(err[i]), f"d={d} |alpha|={n} X={xs[i]:g}"
    return IdentityResult("u_minus_v_prime", worst, tol, where)


def hermite_eigenrelation(n_max=10, tol=1e-9, step=FD2_STEP):
    """-H_n'' + x^2 H_n = (2n+1) H_n, second differences, relative to max |H_n|."""
    xs = np.linspace(-6.0, 6.0, 241)
    h0 = hermite_table(n_max, xs)
    second = _second(lambda x: hermite_table(n_max, x), xs, step)
    resid = -second + xs ** 2 * h0 - (2.0 * np.arange(n_max + 1) + 1.0)[:, None] * h0
    err = np.abs(resid) / np.max(np.abs(h0), axis=1, keepdims=True)
    n, i = np.unravel_index(np.argmax(err), err.shape)
    return IdentityResult("hermite_eigenrelation", float(err[n, i]), tol, f"n={n} x={xs[i]:g}")


def hermite_orthonormality(n_max=30, tol=1e-12):
    """Gram matrix of H_0..H_{n_max} against the identity."""
    rule = gauss_legendre(200, -16.0, 16.0)
    h = hermite_table(n_max, rule.nodes)
    gram = (h * rule.weights) @ h.T
    err = np.abs(gram - np.eye(n_max + 1))
    i, j = np.unravel_index(np.argmax(err), err.shape)
    return IdentityResult("hermite_orthonormality", float(err[i, j]), tol, f"m={i} n={j}")


IDENTITIES: dict[str, Callable[[], IdentityResult]] = {
    "convolution": convolution_identity,
    "convolution_exact": convolution_exact,
    "derivative_recurrence": derivative_recurrence,
    "t_derivative": t_derivative_identity,
    "t_prime_half_s": t_prime_identity,
    "s_positivity": s_positivity,
    "t_lower_bound": t_lower_bound,
    "v_envelope": v_envelope,
    "u_minus_v_prime": u_minus_v_prime,
    "hermite_eigenrelation": hermite_eigenrelation,
    "hermite_orthonormality": hermite_orthonormality,
}


def run_identities(only=None) -> list[IdentityResult]:
    names = list(IDENTITIES) if not only else list(only)
    unknown = [n for n in names if n not in IDENTITIES]
    if unknown:
        raise ValueError(f"unknown identities {unknown}; choose from {', '.join(IDENTITIES)}")
    return [IDENTITIES[n]() for n in names]
