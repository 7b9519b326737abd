"""Closed-form profile of the catenoid family and its pointwise identities.

Every quantity here is an explicit function of (a, s); nothing is
differentiated numerically. Array inputs for ``s`` are supported by the
vectorised helpers (``B2``, ``B``, ``B_prime`` ...), which the ODE right-hand
sides and quadratures call in bulk.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

NEAR_DEGENERATE_WIDTH = 1e-4


@dataclass(frozen=True)
class ParamA:
    """Family parameter a > 1/2.

    Inputs within ``NEAR_DEGENERATE_WIDTH`` of 1/2 are accepted but flagged;
    integrators then work in the rescaled variable s / rho with
    rho = sqrt(a - 1/2).
    """

    a: float

    def __post_init__(self):
        a = float(self.a)
        if not math.isfinite(a) or a <= 0.5:
            raise DomainError(f"parameter a must be a finite number > 1/2, got {self.a!r}")
        object.__setattr__(self, "a", a)

    @property
    def K(self) -> float:
        # (a - 1/2)(a + 1/2) keeps full relative accuracy as a -> 1/2
        return math.sqrt((self.a - 0.5) * (self.a + 0.5))

    @property
    def rho(self) -> float:
        return math.sqrt(self.a - 0.5)

    @property
    def near_degenerate(self) -> bool:
        return self.a - 0.5 < NEAR_DEGENERATE_WIDTH

    @property
    def length_scale(self) -> float:
        """Scale of the natural radial variable (rho near 1/2, else 1)."""
        return self.rho if self.near_degenerate else 1.0


def as_param(a) -> ParamA:
    return a if isinstance(a, ParamA) else ParamA(a)


@dataclass(frozen=True)
class ProfilePoint:
    s: float
    A2: float
    B2: float
    B: float
    Bp: float
    Bpp: float
    II2: float


# -- vectorised closed forms -------------------------------------------------

def B2(a: float, s):
    # a cosh 2s - 1/2 = (a - 1/2) + 2a sinh^2 s, the second form avoids
    # cancellation when a is close to 1/2
    sh = np.sinh(s)
    return (a - 0.5) + 2.0 * a * sh * sh


def B(a: float, s):
    return np.sqrt(B2(a, s))


def A2(a: float, s):
    return B2(a, s) + 1.0


def B_prime(a: float, s):
    return a * np.sinh(2.0 * s) / B(a, s)


def B_second(a: float, s):
    """B'' obtained by differentiating B' = a sinh(2s)/B once more."""
    b = B(a, s)
    bp = a * np.sinh(2.0 * s) / b
    return (2.0 * a * np.cosh(2.0 * s) - bp * bp) / b


def II2(a: float, s):
    """Squared norm of the second fundamental form, 2K^2/B^4."""
    k2 = (a - 0.5) * (a + 0.5)
    b2 = B2(a, s)
    return 2.0 * k2 / (b2 * b2)


def W(a: float, s, k: int):
    """Mode-k potential |II|^2 - 2 - k^2/B^2."""
    b2 = B2(a, s)
    k2 = (a - 0.5) * (a + 0.5)
    return 2.0 * k2 / (b2 * b2) - 2.0 - (k * k) / b2


# -- scalar contract ---------------------------------------------------------

def eval_profile(a, s: float) -> ProfilePoint:
    p = as_param(a)
    s = float(s)
    if not math.isfinite(s):
        raise DomainError(f"s must be finite, got {s!r}")
    b2 = float(B2(p.a, s))
    return ProfilePoint(
        s=s,
        A2=b2 + 1.0,
        B2=b2,
        B=math.sqrt(b2),
        Bp=float(B_prime(p.a, s)),
        Bpp=float(B_second(p.a, s)),
        II2=float(II2(p.a, s)),
    )


def mori_residual(a, s: float) -> float:
    """B B'' + B'^2 - (1 + 2B^2); zero for every profile point."""
    pt = eval_profile(a, s)
    return pt.B * pt.Bpp + pt.Bp * pt.Bp - (1.0 + 2.0 * pt.B2)


def curvature_residual(a, s: float) -> float:
    """Relative gap in the Gauss equation B''/B = 1 + |II|^2/2, |II|^2 = 2K^2/B^4.

    The Gauss route is independent of the closed form. The gap is measured
    relative to B''/B: for large B the term K^2/B^4 sits below roundoff of
    the O(1) curvature, so a residual relative to |II|^2 alone would be
    ill-conditioned.
    """
    p = as_param(a)
    pt = eval_profile(p, s)
    gauss = pt.Bpp / pt.B
    closed = 1.0 + p.K ** 2 / (pt.B2 * pt.B2)
    return (gauss - closed) / gauss


def potential_Wk(a, s: float, k: int) -> float:
    p = as_param(a)
    return float(W(p.a, float(s), int(k)))
