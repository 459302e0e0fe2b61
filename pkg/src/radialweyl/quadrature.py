"""Gauss rules and adaptive integration on finite and half-infinite ranges."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np

from .orthopoly import _scaled_table

__all__ = [
    "QuadratureRule",
    "QuadratureError",
    "gauss_legendre",
    "gauss_laguerre",
    "integrate_adaptive",
    "integrate_semi_infinite",
]


class QuadratureError(RuntimeError):
    """Integration did not reach the requested tolerance.

    ``value`` and ``err_estimate`` hold the last estimate obtained.
    """

    def __init__(self, message, value=math.nan, err_estimate=math.inf):
        super().__init__(message)
        self.value = value
        self.err_estimate = err_estimate


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and positive weights for a weighted integral.

    ``weight_function`` is ``"unit"`` on ``interval`` or ``"exp(-t)"`` on
    ``[0, inf)``.  For the Laguerre rule ``scaled_weights`` carries
    ``weights * exp(nodes)`` computed without underflow, so that
    ``sum(scaled_weights * f(nodes))`` approximates ``int_0^inf f(t) dt``
    directly for integrands that already contain their decay.
    """

    nodes: np.ndarray
    weights: np.ndarray
    weight_function: str
    exactness_degree: int
    interval: tuple[float, float] = (-1.0, 1.0)
    scaled_weights: np.ndarray | None = field(default=None, repr=False)

    def __len__(self):
        return len(self.nodes)

    def integrate(self, f: Callable) -> float:
        """Apply the rule to a vectorized f (the weight function is implied)."""
        return float(np.dot(self.weights, f(self.nodes)))


def _golub_welsch(diag, offdiag, mu0):
    jacobi = np.diag(diag) + np.diag(offdiag, 1) + np.diag(offdiag, -1)
    nodes, vecs = np.linalg.eigh(jacobi)
    return nodes, mu0 * vecs[0] ** 2


@lru_cache(maxsize=64)
def _legendre_reference(n):
    k = np.arange(1, n)
    offdiag = k / np.sqrt(4.0 * k * k - 1.0)
    nodes, weights = _golub_welsch(np.zeros(n), offdiag, 2.0)
    # Symmetrize: the eigen-solver does not return exactly mirrored nodes.
    nodes = 0.5 * (nodes - nodes[::-1])
    weights = 0.5 * (weights + weights[::-1])
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def gauss_legendre(n: int, a: float = -1.0, b: float = 1.0) -> QuadratureRule:
    """n-point Gauss-Legendre rule on [a, b], exact to degree 2n - 1."""
    if int(n) != n or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    if not a < b:
        raise ValueError(f"need a < b, got [{a}, {b}]")
    x, w = _legendre_reference(int(n))
    half, mid = 0.5 * (b - a), 0.5 * (a + b)
    return QuadratureRule(mid + half * x, half * w, "unit", 2 * int(n) - 1, (float(a), float(b)))


@lru_cache(maxsize=64)
def _laguerre_rule(n):
    k = np.arange(1, n)
    nodes, _ = _golub_welsch(2.0 * np.arange(n) + 1.0, k.astype(float), 1.0)
    # Newton polish on the damped L_n; L_n'(x) = n (L_n - L_{n-1}) / x.
    for _ in range(2):
        lag = _scaled_table(n, nodes)
        nodes = nodes - nodes * lag[n] / (n * (lag[n] - lag[n - 1]))
    # Christoffel form: w_i e^{x_i} = 1 / sum_{k<n} (e^{-x_i/2} L_k(x_i))^2.
    # A sum of squares, so insensitive to the last bits of the nodes.
    scaled = 1.0 / np.sum(_scaled_table(n - 1, nodes) ** 2, axis=0)
    with np.errstate(under="ignore"):
        weights = scaled * np.exp(-nodes)
    for arr in (nodes, weights, scaled):
        arr.setflags(write=False)
    return nodes, weights, scaled


def gauss_laguerre(n: int) -> QuadratureRule:
    """n-point Gauss-Laguerre rule for weight exp(-t) on [0, inf).

    Nodes are eigenvalues of the symmetric Jacobi matrix of the Laguerre
    recurrence (diagonal ``2k+1``, off-diagonal ``k``), refined by Newton.
    Weights come from the Christoffel function rather than the eigenvectors,
    whose first components lose all relative accuracy for large nodes.
    """
    if int(n) != n or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    nodes, weights, scaled = _laguerre_rule(int(n))
    return QuadratureRule(nodes, weights, "exp(-t)", 2 * int(n) - 1, (0.0, math.inf), scaled)


def _panel(f, a, b, order):
    x_lo, w_lo = _legendre_reference(order)
    x_hi, w_hi = _legendre_reference(2 * order)
    half, mid = 0.5 * (b - a), 0.5 * (a + b)
    lo = half * np.dot(w_lo, f(mid + half * x_lo))
    hi = half * np.dot(w_hi, f(mid + half * x_hi))
    return [a, b, float(hi), abs(float(hi - lo))]


def _refine(f, panels, rel_tol, abs_tol, max_panels, order):
    # Bisect the worst panel until the summed error meets the tolerance.
    while True:
        value = math.fsum(p[2] for p in panels)
        err = math.fsum(p[3] for p in panels)
        if err <= max(rel_tol * abs(value), abs_tol):
            return value, err
        worst = max(range(len(panels)), key=lambda i: panels[i][3])
        a, b = panels[worst][0], panels[worst][1]
        m = 0.5 * (a + b)
        if len(panels) >= max_panels or not a < m < b:
            raise QuadratureError("adaptive integration did not converge", value, err)
        panels[worst:worst + 1] = [_panel(f, a, m, order), _panel(f, m, b, order)]


def integrate_adaptive(
    f: Callable,
    a: float,
    b: float,
    rel_tol: float = 1e-10,
    abs_tol: float = 1e-300,
    breakpoints=(),
    tail_bound: Callable[[float], float] | None = None,
    initial_length: float = 8.0,
    max_panels: int = 4000,
    max_doublings: int = 60,
    order: int = 10,
) -> tuple[float, float]:
    """Integrate a vectorized ``f`` over [a, b], where ``b`` may be ``inf``.

    Panels are bisected until a ``2*order``-point Gauss-Legendre rule agrees
    with an ``order``-point one.  For ``b = inf`` segments of doubling length
    are appended; the walk ends once ``tail_bound(t)``, an upper bound on
    ``int_t^inf |f|``, is below the tolerance.  Without a tail bound, two
    consecutive segments that contribute less than the tolerance end it.

    Returns ``(value, err_estimate)``.  Raises :class:`QuadratureError`
    carrying the last estimate if the tolerance is not reached.
    """
    if rel_tol <= 0:
        raise ValueError("rel_tol must be positive")
    if not b > a:
        raise ValueError(f"need a < b, got [{a}, {b}]")

    infinite = math.isinf(b)
    edges = [float(a)] + sorted(float(p) for p in breakpoints if a < p < b)
    if not infinite:
        edges.append(float(b))
    panels = [_panel(f, lo, hi, order) for lo, hi in zip(edges[:-1], edges[1:])]
    if not infinite:
        return _refine(f, panels, rel_tol, abs_tol, max_panels, order)

    start = edges[-1]
    length = max(initial_length, start - a)
    quiet = 0
    for _ in range(max_doublings):
        seg = _panel(f, start, start + length, order)
        panels.append(seg)
        value, err = _refine(f, panels, rel_tol, abs_tol, max_panels, order)
        contribution = math.fsum(p[2] for p in panels if p[0] >= start)
        start += length
        length *= 2.0
        tol = max(rel_tol * abs(value), abs_tol)
        if tail_bound is not None:
            tail = tail_bound(start)
            if tail <= tol:
                return value, err + tail
        else:
            quiet = quiet + 1 if abs(contribution) <= tol else 0
            if quiet >= 2:
                return value, err
    raise QuadratureError("tail of the semi-infinite integral did not become negligible", value, err)


def integrate_semi_infinite(
    f: Callable,
    rel_tol: float = 1e-10,
    n_nodes: int = 64,
    breakpoints=(),
    abs_tol: float = 1e-300,
) -> tuple[float, float]:
    """``int_0^inf f(t) dt`` for an integrand carrying exponential decay.

    Gauss-Laguerre with ``n_nodes`` and ``2 n_nodes`` points is tried first,
    using weights premultiplied by ``exp(t)``; if the two disagree by more
    than ``rel_tol`` times the integral of ``|f|``, the adaptive route takes
    over.  Returns ``(value, err_estimate)``.
    """
    coarse = gauss_laguerre(n_nodes)
    fine = gauss_laguerre(2 * n_nodes)
    with np.errstate(under="ignore"):
        f_fine = f(fine.nodes)
        q_coarse = float(np.dot(coarse.scaled_weights, f(coarse.nodes)))
    q_fine = float(np.dot(fine.scaled_weights, f_fine))
    scale = float(np.dot(fine.scaled_weights, np.abs(f_fine)))
    diff = abs(q_fine - q_coarse)
    if diff <= max(rel_tol * scale, abs_tol):
        return q_fine, diff
    return integrate_adaptive(f, 0.0, math.inf, rel_tol=rel_tol, abs_tol=abs_tol, breakpoints=breakpoints)
