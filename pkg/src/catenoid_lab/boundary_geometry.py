"""Twist angle, free-boundary root s0(a), geodesic radius r(a) and the
derived scalars H(a) = sinh r / K, y(a) = B(s0)^2 / K^2.

Quadrature and the bracketed root refinement are delegated to SciPy
(``quad`` and ``brentq``); the bracket search, the choice of formulas and the
derivative extrapolation live here.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from . import profile
from .errors import BracketError, NumericalFailure, QuadratureError
from .profile import ParamA, as_param
from .tolerances import Tolerances, current


@dataclass(frozen=True)
class CatenoidGeometry:
    a: float
    K: float
    s0: float
    phi_s0: float
    r: float
    B_s0: float
    coth_r: float
    y: float
    H: float
    sG: float
    sV: float
    sV_defined: bool
    fbc_residual: float
    near_degenerate: bool

    @property
    def sinh_r(self) -> float:
        return self.H * self.K

    @property
    def cosh_r(self) -> float:
        return math.sqrt(1.0 + self.sinh_r ** 2)

    @property
    def B2_s0(self) -> float:
        return self.B_s0 ** 2


@dataclass(frozen=True)
class GeometryDerivatives:
    a: float
    r_prime: float
    H_prime: float
    y_prime: float
    fd_step: float
    richardson_order: int
    identity_residual: float
    richardson_gap: float


def _phi_integrand(a: float, k: float):
    def f(t):
        b2 = float(profile.B2(a, t))
        return k / ((b2 + 1.0) * math.sqrt(b2))
    return f


def _quad(f, lo, hi, tol: Tolerances) -> float:
    value, err, *rest = quad(f, lo, hi, epsabs=tol.quad_abs, epsrel=tol.quad_rel,
                             limit=200, full_output=1)
    if len(rest) > 1 and rest[1]:
        # QUADPACK message present: accept if the estimate still meets the budget
        if err > max(tol.quad_abs, tol.quad_rel * abs(value)) * 100:
            raise QuadratureError(f"quadrature did not converge: {rest[1]}", err)
    return value


def phi_angle(a, s: float) -> float:
    """phi(s) = K * int_0^s dt / (A^2 B)."""
    p = as_param(a)
    if s < 0:
        raise ValueError("phi_angle expects s >= 0")
    if s == 0:
        return 0.0
    tol = current()
    if p.near_degenerate:
        # integrate in xi = s / rho so the integrand is O(1) on an O(1) range
        rho = p.rho
        f = _phi_integrand(p.a, p.K)
        return _quad(lambda x: rho * f(rho * x), 0.0, s / rho, tol)
    return _quad(_phi_integrand(p.a, p.K), 0.0, float(s), tol)


def phi_angle_grid(a, nodes) -> np.ndarray:
    """phi at many points; signed nodes allowed (phi is odd in s)."""
    p = as_param(a)
    nodes = np.asarray(nodes, dtype=float)
    mag = np.abs(nodes)
    order = np.argsort(mag)
    f = _phi_integrand(p.a, p.K)
    tol = current()
    out = np.empty_like(mag)
    acc, prev = 0.0, 0.0
    for idx in order:
        t = mag[idx]
        if t > prev:
            acc += _quad(f, prev, t, tol)
            prev = t
        out[idx] = acc
    return np.sign(nodes) * out


def fbc_residual(a, s: float) -> float:
    """tanh phi(s) - B(s) K / (a sinh 2s); increasing in s with one root."""
    p = as_param(a)
    b = float(profile.B(p.a, s))
    return math.tanh(phi_angle(p, s)) - b * p.K / (p.a * math.sinh(2.0 * s))


def _bracket_s0(p: ParamA) -> tuple[float, float]:
    lo = 0.5 * p.rho
    f_lo = fbc_residual(p, lo)
    for _ in range(200):
        if f_lo < 0:
            break
        lo *= 0.5
        f_lo = fbc_residual(p, lo)
    else:
        raise BracketError(f"no negative FBC value found down to s={lo:g}", (lo, None))
    hi = lo
    for _ in range(200):
        hi *= 1.25
        f_hi = fbc_residual(p, hi)
        if f_hi > 0:
            return hi / 1.25, hi
        if hi > 60.0:
            break
    raise BracketError(f"no sign change of the FBC on [{lo:g}, {hi:g}]", (lo, hi))


def sV_threshold(a) -> tuple[float, bool]:
    """Sign-change point of 3B^2 - 2K^2, or (0, False) when a <= 1."""
    p = as_param(a)
    c = (2.0 * p.a ** 2 + 1.0) / (3.0 * p.a)
    if c <= 1.0:
        return 0.0, False
    return 0.5 * math.acosh(c), True


@functools.lru_cache(maxsize=4096)
def _solve_s0_cached(a: float, tol: Tolerances) -> CatenoidGeometry:
    p = ParamA(a)
    lo, hi = _bracket_s0(p)
    s0 = brentq(lambda s: fbc_residual(p, s), lo, hi, xtol=tol.root, rtol=4 * np.finfo(float).eps,
                maxiter=200)
    res = fbc_residual(p, s0)
    if abs(res) > 1e-12:
        raise NumericalFailure(f"FBC residual {res:.3e} exceeds 1e-12 at a={a}", "solve_s0")
    phi0 = phi_angle(p, s0)
    b2 = float(profile.B2(p.a, s0))
    # sinh^2 r = A^2 sinh^2 phi + B^2 has no cancellation, unlike acosh(A cosh phi)
    sinh_r = math.sqrt((b2 + 1.0) * math.sinh(phi0) ** 2 + b2)
    r = math.asinh(sinh_r)
    k = p.K
    sV, sV_ok = sV_threshold(p)
    return CatenoidGeometry(
        a=p.a, K=k, s0=s0, phi_s0=phi0, r=r, B_s0=math.sqrt(b2),
        coth_r=math.sqrt(1.0 + sinh_r ** 2) / sinh_r,
        y=b2 / k ** 2, H=sinh_r / k,
        sG=0.5 * math.acosh(2.0 * p.a),
        sV=sV, sV_defined=sV_ok, fbc_residual=res,
        near_degenerate=p.near_degenerate,
    )


def solve_s0(a) -> CatenoidGeometry:
    p = as_param(a)
    return _solve_s0_cached(p.a, current())


def fd_step(a) -> float:
    return current().fd_step_scale * max(1.0, as_param(a).a)


def geometry_derivatives(a, step: float | None = None) -> GeometryDerivatives:
    """r', H', y' by central differences at h and h/2 plus one Richardson step."""
    p = as_param(a)
    h = fd_step(p) if step is None else float(step)
    if p.a - 0.5 <= 2.0 * h:
        raise NumericalFailure(f"a={p.a} too close to 1/2 for step {h:g}", "geometry_derivatives")

    def central(hh):
        g_plus, g_minus = solve_s0(p.a + hh), solve_s0(p.a - hh)
        return np.array([g_plus.r - g_minus.r, g_plus.H - g_minus.H, g_plus.y - g_minus.y]) / (2 * hh)

    d_h, d_half = central(h), central(h / 2)
    d = (4.0 * d_half - d_h) / 3.0
    gap = float(np.max(np.abs(d_half - d_h) / (np.abs(d) + 1e-300)))
    g = solve_s0(p)
    k2 = p.K ** 2
    lhs = k2 * d[1] / g.H
    rhs = k2 * d[0] * g.coth_r - p.a
    ident = abs(lhs - rhs) / max(abs(rhs), abs(lhs), 1e-300)
    return GeometryDerivatives(
        a=p.a, r_prime=float(d[0]), H_prime=float(d[1]), y_prime=float(d[2]),
        fd_step=h, richardson_order=4, identity_residual=ident, richardson_gap=gap,
    )


def pinching_margin(geom: CatenoidGeometry) -> float:
    """B(s0)^2 - 2K^2, written as 2a(sinh^2 s0 - (a - 1/2)) to limit cancellation."""
    return 2.0 * geom.a * (math.sinh(geom.s0) ** 2 - (geom.a - 0.5))


def coth_identity_residual(geom: CatenoidGeometry) -> float:
    """|coth r - a sinh(2 s0)/B^2| / coth r."""
    rhs = geom.a * math.sinh(2 * geom.s0) / geom.B2_s0
    return abs(geom.coth_r - rhs) / geom.coth_r


def pinching_identity_residual(geom: CatenoidGeometry) -> float:
    """Relative gap in sinh^2 r - 4K^2 = (B^2 - 2K^2)^2 / (B^2 - K^2)."""
    k2 = geom.K ** 2
    b2 = geom.B2_s0
    sh2 = geom.sinh_r ** 2
    margin = pinching_margin(geom)
    return abs(sh2 - 4 * k2 - margin ** 2 / (b2 - k2)) / sh2


def hy_identity_residual(geom: CatenoidGeometry) -> float:
    y = geom.y
    return abs(geom.H ** 2 - y * y / (y - 1.0)) / geom.H ** 2
