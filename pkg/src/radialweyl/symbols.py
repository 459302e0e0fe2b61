"""Radial symbol profiles ``Phi`` with exact derivatives and catalog metadata.

A radial symbol is ``F(x, xi) = Phi(|x|^2 + |xi|^2)`` on ``R^{2d}``.  All
profile callables are vectorized over numpy arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "RadialProfile",
    "RadialSymbol",
    "BUILTIN_NAMES",
    "builtin_profile",
    "scale_profile",
    "default_suite",
]

BOUNDED = "bounded"
POLYNOMIAL = "polynomial"


@dataclass(frozen=True)
class RadialProfile:
    """A profile ``Phi`` on ``[0, inf)`` and the metadata the bound needs.

    ``flat_order_m`` is the smallest ``m >= 1`` with ``Phi^(m)(0) != 0`` and
    ``deriv_m_at_zero`` that derivative; both are ``None`` when every
    derivative at 0 vanishes or the order is unknown.  ``breakpoints`` lists
    points where ``Phi`` is not analytic, used to place integration panels.
    ``taylor`` returns ``[Phi^(k)(0) for k < K]`` for profiles analytic at 0.
    """

    name: str
    eval: Callable
    deriv: Callable
    value_at_zero: float
    flat_order_m: int | None
    deriv_m_at_zero: float | None
    nondecreasing: bool
    growth_class: str = BOUNDED
    params: tuple[float, ...] = ()
    breakpoints: tuple[float, ...] = ()
    taylor: Callable[[int], list[float]] | None = field(default=None, repr=False)

    def __call__(self, t):
        return self.eval(t)

    @property
    def bounded(self) -> bool:
        return self.growth_class == BOUNDED

    @property
    def label(self) -> str:
        if not self.params:
            return self.name
        return f"{self.name}({','.join(format(p, 'g') for p in self.params)})"


@dataclass(frozen=True)
class RadialSymbol:
    profile: RadialProfile
    d: int
    h: float

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 1:
            raise ValueError(f"d must be a positive integer, got {self.d!r}")
        if not self.h > 0:
            raise ValueError(f"h must be positive, got {self.h!r}")

    def __call__(self, x, xi):
        """Evaluate ``F`` with the coordinates on the last axis."""
        x, xi = np.asarray(x, float), np.asarray(xi, float)
        return self.profile.eval(np.sum(x * x, axis=-1) + np.sum(xi * xi, axis=-1))


def _as_array(t):
    return np.asarray(t, dtype=float)


def _constant(c=1.0):
    c = float(c)
    return RadialProfile(
        "constant", lambda t: np.full_like(_as_array(t), c), lambda t: np.zeros_like(_as_array(t)),
        c, None, None, True, BOUNDED, (c,),
        taylor=lambda k: [c] + [0.0] * (k - 1),
    )


def _linear():
    return RadialProfile(
        "linear", lambda t: _as_array(t) * 1.0, lambda t: np.ones_like(_as_array(t)),
        0.0, 1, 1.0, True, POLYNOMIAL,
        taylor=lambda k: [0.0, 1.0, *([0.0] * (k - 2))][:k],
    )


def _one_minus_exp():
    return RadialProfile(
        "one_minus_exp", lambda t: -np.expm1(-_as_array(t)), lambda t: np.exp(-_as_array(t)),
        0.0, 1, 1.0, True, BOUNDED,
        taylor=lambda k: [0.0] + [(-1.0) ** (j + 1) for j in range(1, k)],
    )


def _exp_decay():
    # Decreasing on purpose: a negative control for the hypotheses check.
    return RadialProfile(
        "exp_decay", lambda t: np.exp(-_as_array(t)), lambda t: -np.exp(-_as_array(t)),
        1.0, 1, -1.0, False, BOUNDED,
        taylor=lambda k: [(-1.0) ** j for j in range(k)],
    )


def _sech2(t):
    e = np.exp(-2.0 * np.abs(t))
    return 4.0 * e / (1.0 + e) ** 2


def _tanh():
    return RadialProfile(
        "tanh", lambda t: np.tanh(_as_array(t)), lambda t: _sech2(_as_array(t)),
        0.0, 1, 1.0, True, BOUNDED,
    )


def _rational():
    return RadialProfile(
        "rational", lambda t: _as_array(t) / (1.0 + _as_array(t)),
        lambda t: 1.0 / (1.0 + _as_array(t)) ** 2,
        0.0, 1, 1.0, True, BOUNDED,
        taylor=lambda k: [0.0] + [(-1.0) ** (j + 1) * math.factorial(j) for j in range(1, k)],
    )


def _flat_power(m=2):
    if int(m) != m or m < 1:
        raise ValueError(f"flat_power needs an integer m >= 1, got {m!r}")
    m = int(m)

    def phi(t):
        tm = _as_array(t) ** m
        return tm / (1.0 + tm)

    def dphi(t):
        t = _as_array(t)
        return m * t ** (m - 1) / (1.0 + t ** m) ** 2

    def taylor(k):
        # t^m/(1+t^m) = sum_{j>=1} (-1)^{j+1} t^{jm}
        out = [0.0] * k
        for j in range(1, k // m + 2):
            if j * m < k:
                out[j * m] = (-1.0) ** (j + 1) * math.factorial(j * m)
        return out

    return RadialProfile(
        "flat_power", phi, dphi, 0.0, m, float(math.factorial(m)), True, BOUNDED, (float(m),),
        taylor=taylor,
    )


def _smooth_step(a=0.5, b=2.0):
    a, b = float(a), float(b)
    if not 0.0 <= a < b:
        raise ValueError(f"smooth_step needs 0 <= a < b, got a={a}, b={b}")
    width = b - a

    # psi(s) = g(s) / (g(s) + g(1-s)) with g(s) = exp(-1/s) for s > 0.
    def parts(t):
        s = np.clip((_as_array(t) - a) / width, 0.0, 1.0)
        inside = (s > 0) & (s < 1)
        si = np.where(inside, s, 0.5)
        # psi = 1 / (1 + exp(1/s - 1/(1-s)))
        z = 1.0 / si - 1.0 / (1.0 - si)
        return s, inside, si, z

    def phi(t):
        s, inside, _, z = parts(t)
        with np.errstate(over="ignore"):
            val = 1.0 / (1.0 + np.exp(z))
        return np.where(inside, val, np.where(s >= 1.0, 1.0, 0.0))

    def dphi(t):
        _, inside, si, z = parts(t)
        # d psi/ds = psi (1 - psi) (1/s^2 + 1/(1-s)^2)
        with np.errstate(over="ignore"):
            e = np.exp(-np.abs(z))
        psi_1m_psi = e / (1.0 + e) ** 2
        ds = psi_1m_psi * (1.0 / si ** 2 + 1.0 / (1.0 - si) ** 2) / width
        return np.where(inside, ds, 0.0)

    return RadialProfile(
        "smooth_step", phi, dphi, 0.0, None, None, True, BOUNDED, (a, b),
        breakpoints=(a, b) if a > 0 else (b,),
    )


_BUILDERS = {
    "constant": (_constant, 1),
    "linear": (_linear, 0),
    "one_minus_exp": (_one_minus_exp, 0),
    "tanh": (_tanh, 0),
    "rational": (_rational, 0),
    "flat_power": (_flat_power, 1),
    "smooth_step": (_smooth_step, 2),
    "exp_decay": (_exp_decay, 0),
}

BUILTIN_NAMES = tuple(_BUILDERS)


def builtin_profile(name: str, params: Sequence[float] = ()) -> RadialProfile:
    """Look up a catalog profile by name.

    ``params`` may be shorter than the builder's parameter list, in which
    case defaults fill in (constant: c=1; flat_power: m=2; smooth_step:
    a=0.5, b=2).
    """
    try:
        builder, max_params = _BUILDERS[name]
    except KeyError:
        raise ValueError(f"unknown profile {name!r}; choose from {', '.join(BUILTIN_NAMES)}") from None
    params = list(params)
    if len(params) > max_params:
        raise ValueError(f"profile {name!r} takes at most {max_params} parameters, got {len(params)}")
    return builder(*params)


def scale_profile(profile: RadialProfile, h: float) -> RadialProfile:
    """Return ``Phi_h(t) = Phi(h t)`` with ``Phi_h'(t) = h Phi'(h t)``."""
    if not h > 0:
        raise ValueError(f"h must be positive, got {h!r}")
    h = float(h)
    f, df = profile.eval, profile.deriv
    taylor = None
    if profile.taylor is not None:
        base = profile.taylor
        taylor = lambda k: [c * h ** j for j, c in enumerate(base(k))]  # noqa: E731
    return replace(
        profile,
        name=profile.name if h == 1.0 else f"{profile.name}@h={h:g}",
        eval=lambda t: f(h * _as_array(t)),
        deriv=lambda t: h * df(h * _as_array(t)),
        deriv_m_at_zero=None if profile.deriv_m_at_zero is None
        else profile.deriv_m_at_zero * h ** profile.flat_order_m,
        breakpoints=tuple(p / h for p in profile.breakpoints),
        taylor=taylor,
    )


def default_suite(include_unbounded: bool = True) -> list[RadialProfile]:
    """The nondecreasing catalog profiles used by the sweeps."""
    names = [
        ("constant", (1.0,)),
        ("linear", ()),
        ("one_minus_exp", ()),
        ("tanh", ()),
        ("rational", ()),
        ("flat_power", (1.0,)),
        ("flat_power", (2.0,)),
        ("flat_power", (3.0,)),
        ("smooth_step", (0.5, 2.0)),
        ("smooth_step", (0.0, 1.0)),
    ]
    suite = [builtin_profile(n, p) for n, p in names]
    return [p for p in suite if include_unbounded or p.bounded]
