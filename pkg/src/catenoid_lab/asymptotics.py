"""Constants of the two endpoint regimes and fits that compare them with the
computed geometry.

Near a = 1/2 everything is governed by sigma_star, the positive root of
sigma = coth(sigma); for large a the offset d_inf of r(a) - (3/2) log a is
expressed through Gamma(1/4).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .boundary_geometry import geometry_derivatives, solve_s0
from .errors import NumericalFailure

# Lanczos approximation, g = 7, nine terms (relative error below 2e-15 on x >= 1/2)
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def lanczos_gamma(x: float) -> float:
    """Gamma(x) for x >= 1/2 by the Lanczos series (no reflection)."""
    if x < 0.5:
        raise ValueError("lanczos_gamma is only used on x >= 1/2; shift the argument first")
    x -= 1.0
    acc = _LANCZOS_COEF[0]
    for i, c in enumerate(_LANCZOS_COEF[1:], start=1):
        acc += c / (x + i)
    t = x + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * t ** (x + 0.5) * math.exp(-t) * acc


def gamma_quarter() -> float:
    """Gamma(1/4) = 4 Gamma(5/4), evaluated without the reflection formula.

    The reflection identity Gamma(1/4) Gamma(3/4) = pi sqrt(2) is then an
    independent check (see ``reflection_residual``).
    """
    return 4.0 * lanczos_gamma(1.25)


def reflection_residual() -> float:
    return abs(gamma_quarter() * lanczos_gamma(0.75) - math.pi * math.sqrt(2.0)) / (math.pi * math.sqrt(2.0))


def solve_sigma_star(lo: float = 0.9, hi: float = 2.0, tol: float = 1e-15) -> float:
    """Bisection for sigma - coth(sigma) = 0; the function is increasing."""
    def f(x):
        return x - 1.0 / math.tanh(x)

    if not (f(lo) < 0 < f(hi)):
        raise NumericalFailure("sigma_star bracket does not straddle the root", "compute_constants")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if f(mid) < 0:
            lo = mid
        else:
            hi = mid
    # pick the endpoint with the smaller residual
    return lo if abs(f(lo)) <= abs(f(hi)) else hi


@dataclass(frozen=True)
class AsymptoticConstants:
    sigma_star: float
    rho_star: float
    c_star: float
    s_val: float
    C0: float
    xi1: float
    I_star: float
    d_inf: float
    gamma_quarter: float
    formulas: dict = field(default_factory=dict, compare=False)

    @property
    def y_half_limit(self) -> float:
        return math.cosh(self.sigma_star) ** 2

    @property
    def y_slope_infinity(self) -> float:
        return math.exp(2.0 * self.d_inf) / 4.0


FORMULAS = {
    "sigma_star": "root of sigma = coth(sigma) on [0.9, 2]",
    "rho_star": "sinh(sigma_star)",
    "c_star": "sigma_star * cosh(sigma_star)",
    "s_val": "sinh(sigma_star)^2",
    "C0": "c_star (s - 1)(3s - 2) / (12 s)",
    "xi1": "(s - 1)(s - 4)(s + 1) / (12 s c_star)",
    "I_star": "-(1/12) [9 sigma_star + (7/2) sinh(2 sigma_star) - 10 / sigma_star]",
    "d_inf": "log(sqrt(2) Gamma(1/4)^2 / pi^(3/2))",
    "gamma_quarter": "4 Gamma(5/4), Lanczos series",
}


def compute_constants() -> AsymptoticConstants:
    sig = solve_sigma_star()
    rho = math.sinh(sig)
    c_star = sig * math.cosh(sig)
    s = rho * rho
    g14 = gamma_quarter()
    return AsymptoticConstants(
        sigma_star=sig, rho_star=rho, c_star=c_star, s_val=s,
        C0=c_star * (s - 1.0) * (3.0 * s - 2.0) / (12.0 * s),
        xi1=(s - 1.0) * (s - 4.0) * (s + 1.0) / (12.0 * s * c_star),
        I_star=-(9.0 * sig + 3.5 * math.sinh(2.0 * sig) - 10.0 / sig) / 12.0,
        d_inf=math.log(math.sqrt(2.0) * g14 * g14 / math.pi ** 1.5),
        gamma_quarter=g14, formulas=dict(FORMULAS),
    )


def c0_by_expansion(consts: AsymptoticConstants | None = None) -> dict:
    """Rebuild C0 from the second-order expansion of the boundary data.

    xi1 is recovered from the matching of the rho^3 terms of the free-boundary
    condition (not from its factored closed form); beta1 and alpha1 are the
    rho^4 coefficients of B(s0)^2 and of sqrt(B^2 - K^2).
    """
    c = consts or compute_constants()
    sig, h = c.sigma_star, c.rho_star
    ch = math.cosh(sig)
    s = c.s_val
    g_B = 0.5 + s * (s + 6.0) / (6.0 * ch * ch)
    g_a = 2.0 * s / 3.0 + 2.0
    xi1 = -(s / ch) * (c.I_star - sig ** 3 / 3.0 + sig * (g_a - g_B))
    beta1 = 2.0 * h * xi1 + s * s / 3.0 + 2.0 * s
    alpha1 = xi1 / h + s / 6.0 + 1.0 - 1.0 / (2.0 * s)
    C0 = c.c_star * (beta1 / (ch * ch) - alpha1 - 0.5)
    return {"xi1": xi1, "beta1": beta1, "alpha1": alpha1, "C0": C0}


def factorization_residual(s: float) -> float:
    """s^3 - 4s^2 - s + 4 against (s - 1)(s - 4)(s + 1), relative."""
    lhs = s ** 3 - 4 * s ** 2 - s + 4
    rhs = (s - 1) * (s - 4) * (s + 1)
    return abs(lhs - rhs) / max(1.0, abs(s) ** 3)


def slope_gap(a: float) -> float:
    """g(a) = K^2 r'(a) - a tanh r(a); behaves like C0 (a - 1/2)^{3/2} at 1/2."""
    geom = solve_s0(a)
    d = geometry_derivatives(a)
    return geom.K ** 2 * d.r_prime - a * math.tanh(geom.r)


# -- endpoint fits -----------------------------------------------------------

@dataclass(frozen=True)
class FitResult:
    name: str
    estimate: float
    target: float
    abs_deviation: float
    rel_deviation: float
    at: tuple = ()


@dataclass(frozen=True)
class EndpointReport:
    side: str
    fits: tuple
    warnings: tuple = ()

    def get(self, name: str) -> FitResult:
        for f in self.fits:
            if f.name == name:
                return f
        raise KeyError(name)


def _fit(name, est, target, at=()):
    gap = abs(est - target)
    return FitResult(name, float(est), float(target), float(gap), float(gap / abs(target)), tuple(at))


def endpoint_checks(side: str, a_grid) -> EndpointReport:
    """Compare computed geometry with the limiting constants at one endpoint."""
    consts = compute_constants()
    grid = sorted(float(a) for a in a_grid)
    warnings = []
    if len(grid) < 4:
        warnings.append(f"only {len(grid)} grid points; fits use the points nearest the endpoint")
    fits = []
    if side == "half":
        if not grid or grid[0] <= 0.5 + 1e-4 or grid[-1] > 0.6:
            raise ValueError("half-side grid must lie in (1/2 + 1e-4, 1/2 + 1e-1]")
        if len(grid) < 2:
            raise ValueError("half-side fits need at least two grid points")
        a1, a2 = grid[0], grid[1]
        d1, d2 = a1 - 0.5, a2 - 0.5
        g1, g2 = solve_s0(a1), solve_s0(a2)
        s1 = (g1.H - consts.c_star) / d1
        s2 = (g2.H - consts.c_star) / d2
        fits.append(_fit("H_slope", (d2 * s1 - d1 * s2) / (d2 - d1), consts.C0, (a1, a2)))
        fits.append(_fit("y_limit", g1.y, consts.y_half_limit, (a1,)))
        fits.append(_fit("g_ratio", slope_gap(a1) / d1 ** 1.5, consts.C0, (a1,)))
        fits.append(_fit("s0_over_rho", g1.s0 / math.sqrt(d1), consts.rho_star, (a1,)))
        fits.append(_fit("H_prime", geometry_derivatives(a1).H_prime, consts.C0, (a1,)))
    elif side == "infinity":
        if not grid or grid[0] < 20 or grid[-1] > 500:
            raise ValueError("infinity-side grid must lie in [20, 500]")
        a = grid[-1]
        g = solve_s0(a)
        offset = g.r - 1.5 * math.log(a)
        fits.append(_fit("r_offset", offset, consts.d_inf, (a,)))
        fits.append(_fit("y_over_a", g.y / a, consts.y_slope_infinity, (a,)))
        fits.append(_fit("a_r_prime", a * geometry_derivatives(a).r_prime, 1.5, (a,)))
    else:
        raise ValueError("side must be 'half' or 'infinity'")
    return EndpointReport(side=side, fits=tuple(fits), warnings=tuple(warnings))


def empirical_positive_slope_extent(a_grid, margin: float = 1e-3) -> float | None:
    """Largest grid a up to which H'(a) > margin holds without interruption.

    Evidence only: the asymptotic argument guarantees positivity on some
    unquantified interval (1/2, 1/2 + delta).
    """
    last = None
    for a in sorted(float(x) for x in a_grid):
        if geometry_derivatives(a).H_prime > margin:
            last = a
        else:
            break
    return last
