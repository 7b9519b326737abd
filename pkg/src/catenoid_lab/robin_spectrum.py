"""Radial Robin eigenproblems of the Jacobi operator.

For each Fourier mode k and parity the problem is

    -(B u')' - B (|II|^2 - 2 - k^2/B^2) u = mu B u   on (0, s0),
    u'(0) = 0 (even) or u(0) = 0 (odd),   u'(s0) = coth r u(s0).

Eigenvalues come from the Pruefer angle theta (u = R sin theta,
B u' = R cos theta): theta(s0; mu) is increasing in mu and the n-th eigenvalue
is the mu where it reaches beta + n pi, beta = arccot(B(s0) coth r).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import Polynomial
from numpy.polynomial.legendre import leggauss
from scipy.integrate import simpson, solve_ivp
from scipy.interpolate import CubicHermiteSpline
from scipy.optimize import brentq

from . import profile
from .boundary_geometry import phi_angle_grid, solve_s0
from .errors import BracketError, IntegrationError
from .jacobi_fields import GridFunction, _fields_from_phi, closed_grid_function, integrate_phi_a
from .profile import as_param
from .tolerances import current

PARITIES = ("even", "odd")
MAX_EIGEN_INDEX = 8
ZERO_NEAR_END = 1e-10
SHOOT_NODES = 2001


@dataclass(frozen=True)
class ModeSector:
    k: int
    parity: str

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 0:
            raise ValueError(f"mode k must be a non-negative integer, got {self.k!r}")
        if self.parity not in PARITIES:
            raise ValueError(f"parity must be 'even' or 'odd', got {self.parity!r}")
        object.__setattr__(self, "k", int(self.k))

    def __str__(self):
        return f"k={self.k}/{self.parity}"


@dataclass(frozen=True)
class ShootingCount:
    n_z: int
    delta: int
    N_minus: int
    zeros: tuple = ()
    boundary_defect: float = float("nan")
    ambiguous: bool = False


@dataclass(frozen=True)
class SpectralReport:
    sector: ModeSector
    eigenvalues: tuple
    negative_count: int
    kernel_margin: float
    kernel_flags: tuple
    shooting_count: int
    zero_solution_zeros: int
    boundary_correction: int
    shooting_ambiguous: bool
    notes: tuple = ()

    @property
    def near_kernel(self) -> bool:
        return any(self.kernel_flags)

    @property
    def counts_agree(self) -> bool:
        return self.negative_count == self.shooting_count


@dataclass(frozen=True)
class PiconeResult:
    lhs: float
    rhs: float
    residual: float
    h_coeffs: tuple = field(default=(), compare=False)


# -- Pruefer machinery -------------------------------------------------------

class _Sector:
    """Coefficients and boundary data of one (a, k, parity) problem."""

    def __init__(self, a, sector: ModeSector):
        p = as_param(a)
        self.p = p
        self.sector = sector
        self.geom = solve_s0(p)
        self.a = p.a
        self.k2 = p.K ** 2
        self.kk = float(sector.k ** 2)
        self.scale = p.length_scale
        self.alpha = self.geom.coth_r
        # target angle at s0 lies in (0, pi/2) because coth r > 0
        self.beta = math.atan2(1.0, self.geom.B_s0 * self.alpha)
        self.theta0 = math.pi / 2 if sector.parity == "even" else 0.0
        grid = np.linspace(0.0, self.geom.s0, 65)
        self.w_max = float(np.max(np.abs(profile.W(self.a, grid, sector.k))))
        self.tol = current()

    def _coeffs(self, s):
        b2 = float(profile.B2(self.a, s))
        w = 2.0 * self.k2 / (b2 * b2) - 2.0 - self.kk / b2
        return math.sqrt(b2), w

    def theta_end(self, mu: float) -> float:
        scale = self.scale

        def rhs(x, th):
            b, w = self._coeffs(scale * x)
            c, s = math.cos(th[0]), math.sin(th[0])
            return [scale * (c * c / b + b * (w + mu) * s * s)]

        sol = solve_ivp(rhs, (0.0, self.geom.s0 / scale), [self.theta0], method="DOP853",
                        rtol=self.tol.ode_rel * 10, atol=self.tol.ode_abs)
        if not sol.success:
            raise IntegrationError(f"Pruefer integration failed at mu={mu:g}: {sol.message}")
        return float(sol.y[0, -1])

    def solution(self, mu: float, n_nodes: int = SHOOT_NODES) -> GridFunction:
        """Solution from the left boundary data, normalised u(0)=1 or u'(0)=1."""
        scale = self.scale

        def rhs(x, y):
            b, w = self._coeffs(scale * x)
            return [scale * y[1] / b, -scale * b * (w + mu) * y[0]]

        b0 = float(profile.B(self.a, 0.0))
        y0 = [1.0, 0.0] if self.sector.parity == "even" else [0.0, b0]
        nodes = np.linspace(0.0, self.geom.s0, n_nodes)
        sol = solve_ivp(rhs, (0.0, self.geom.s0 / scale), y0, method="DOP853", t_eval=nodes / scale,
                        rtol=self.tol.ode_rel, atol=self.tol.ode_abs)
        if not sol.success:
            raise IntegrationError(f"shooting integration failed at mu={mu:g}: {sol.message}")
        b = profile.B(self.a, nodes)
        return GridFunction(nodes, sol.y[0], sol.y[1] / b, label=f"psi[{self.sector}]",
                            meta={"mu": mu})

    def eigenvalue(self, n: int, lower: float | None, ceiling: float) -> tuple[float, float, list]:
        notes = []
        target = self.beta + n * math.pi
        c = 1.0 + self.w_max
        lo = -c if lower is None else lower
        for _ in range(200):
            if self.theta_end(lo) < target:
                break
            lo = 2.0 * lo if lo < 0 else lo - c
        else:
            raise BracketError(f"no lower bracket for eigenvalue {n} in {self.sector}", (lo, None))
        hi = max(c, lo + c)
        while True:
            th = self.theta_end(hi)
            if th > target:
                break
            if hi >= ceiling:
                ceiling *= 2.0
                notes.append(f"search ceiling raised to {ceiling:g} for n={n}")
                if ceiling > 1e9:
                    raise BracketError(f"eigenvalue {n} in {self.sector} not bracketed below {ceiling:g}",
                                       (lo, hi))
            hi = min(2.0 * hi if hi > 0 else c, ceiling)
        rel = self.tol.eig_rel
        mu = brentq(lambda m: self.theta_end(m) - target, lo, hi, xtol=rel / 2, rtol=rel / 2, maxiter=200)
        return mu, ceiling, notes


def _locate_zeros(psi: GridFunction) -> list[float]:
    """Interior zeros of a sampled function, refined on its Hermite interpolant."""
    spline = CubicHermiteSpline(psi.nodes, psi.values, psi.derivs)
    v = psi.values
    zeros = []
    for i in range(len(v) - 1):
        left, right = v[i], v[i + 1]
        if i == 0 and left == 0.0:
            continue  # the Dirichlet start is not an interior zero
        if left == 0.0:
            zeros.append(float(psi.nodes[i]))
        elif left * right < 0:
            zeros.append(float(brentq(spline, psi.nodes[i], psi.nodes[i + 1], xtol=1e-15)))
    return [z for z in zeros if 0.0 < z < psi.end or abs(z - psi.end) < ZERO_NEAR_END]


def zero_energy_solution(a, sector: ModeSector, n_nodes: int = SHOOT_NODES) -> GridFunction:
    """psi_0: phi_a for (0, even), u_star for (0, odd), otherwise integrated."""
    if sector.k == 0 and sector.parity == "even":
        return integrate_phi_a(a, n_nodes)
    if sector.k == 0 and sector.parity == "odd":
        return closed_grid_function(a, n_nodes, "u_star")
    return _Sector(a, sector).solution(0.0, n_nodes)


def shooting_count(a, sector: ModeSector) -> ShootingCount:
    """Negative count from the zero-energy solution: interior zeros plus a
    boundary correction that is 1 when psi'/psi - coth r < 0 at s0."""
    p = as_param(a)
    geom = solve_s0(p)
    psi = zero_energy_solution(p, sector)
    zeros = _locate_zeros(psi)
    end_zero = any(abs(z - psi.end) < ZERO_NEAR_END for z in zeros)
    interior = [z for z in zeros if psi.end - z >= ZERO_NEAR_END]
    v, d = float(psi.values[-1]), float(psi.derivs[-1])
    defect = d - geom.coth_r * v
    scale = abs(d) + geom.coth_r * abs(v)
    kernel_like = abs(defect) <= 1e-8 * scale
    ambiguous = end_zero or kernel_like or v == 0.0
    if ambiguous:
        delta = 0  # zero-energy solution (nearly) satisfies the Robin condition: kernel, not negative
    else:
        delta = 1 if d / v - geom.coth_r < 0 else 0
    return ShootingCount(n_z=len(interior), delta=delta, N_minus=len(interior) + delta,
                         zeros=tuple(interior), boundary_defect=defect / scale if scale else 0.0,
                         ambiguous=ambiguous)


def eigenvalues(a, sector: ModeSector, n_max: int = 2) -> SpectralReport:
    """First n_max + 1 eigenvalues, extended while the last one is still negative."""
    if n_max > MAX_EIGEN_INDEX or n_max < 0:
        raise ValueError(f"n_max must lie in [0, {MAX_EIGEN_INDEX}]")
    prob = _Sector(a, sector)
    ceiling = 50.0 * (1.0 + prob.w_max)
    mus, notes = [], []
    lower = None
    n = 0
    while n <= n_max or (mus[-1] < 0 and n <= MAX_EIGEN_INDEX):
        mu, ceiling, extra = prob.eigenvalue(n, lower, ceiling)
        notes.extend(extra)
        mus.append(mu)
        lower = mu
        n += 1
    if mus[-1] < 0:
        notes.append("eigenvalue list exhausted while still negative; count is a lower bound")
    tol = prob.tol
    scale = 1.0 + abs(mus[1]) if len(mus) > 1 else 1.0 + abs(mus[0])
    flags = tuple(abs(m) < tol.kernel_rel * scale for m in mus)
    negative = sum(1 for m, f in zip(mus, flags) if m < 0 and not f)
    sc = shooting_count(a, sector)
    return SpectralReport(
        sector=sector, eigenvalues=tuple(mus), negative_count=negative,
        kernel_margin=float(min(abs(m) for m in mus)), kernel_flags=flags,
        shooting_count=sc.N_minus, zero_solution_zeros=sc.n_z, boundary_correction=sc.delta,
        shooting_ambiguous=sc.ambiguous, notes=tuple(notes),
    )


def eigenfunction(a, sector: ModeSector, mu: float, n_nodes: int = 801) -> GridFunction:
    return _Sector(a, sector).solution(mu, n_nodes)


# -- quadratic forms ---------------------------------------------------------

def quadratic_form(a, k: int, u: GridFunction) -> float:
    """Radial form of mode k for an even or odd u given on [0, s0].

    Returns 2 int_0^s0 [B u'^2 - B W_k u^2] - 2 coth r B(s0) u(s0)^2, i.e. the
    full-interval form with both boundary points counted.
    """
    p = as_param(a)
    geom = solve_s0(p)
    if abs(u.end - geom.s0) > 1e-12 * max(1.0, geom.s0):
        raise ValueError("grid function must end at s0(a)")
    s = u.nodes
    b = profile.B(p.a, s)
    integrand = b * u.derivs ** 2 - b * profile.W(p.a, s, k) * u.values ** 2
    return 2.0 * simpson(integrand, x=s) - 2.0 * geom.coth_r * geom.B_s0 * u.values[-1] ** 2


def _full_interval_form(a: float, k: int, s, w, u, du, coth_r, b_end, u_ends) -> float:
    b = profile.B(a, s)
    bulk = np.dot(w, b * du * du - b * profile.W(a, s, k) * u * u)
    return float(bulk - coth_r * b_end * (u_ends[0] ** 2 + u_ends[1] ** 2))


def _gauss_nodes(s0: float, n: int):
    x, w = leggauss(n)
    return s0 * x, s0 * w


def neumann_projection(q: Polynomial, s0: float) -> Polynomial:
    """q minus a linear-plus-quadratic correction so that h'(+-s0) = 0.

    For even q this is q - q'(s0) s^2 / (2 s0).
    """
    dq = q.deriv()
    dp, dm = dq(s0), dq(-s0)
    c1 = 0.5 * (dp + dm)
    c2 = (dp - dm) / (4.0 * s0)
    return q - Polynomial([0.0, c1, c2])


def picone_check(a, k: int, base: str, h_coeffs, n_quad: int = 160) -> PiconeResult:
    """Compare the radial form of u = base * h with its Picone rewriting."""
    p = as_param(a)
    geom = solve_s0(p)
    s0 = geom.s0
    h = Polynomial(np.asarray(h_coeffs, dtype=float))
    if base == "B":
        h = neumann_projection(h, s0)
    elif base != "f_star":
        raise ValueError("base must be 'f_star' or 'B'")
    s, w = _gauss_nodes(s0, n_quad)
    ends = np.array([s0, -s0])
    pts = np.concatenate([s, ends])
    hv, dh = h(pts), h.deriv()(pts)
    b = profile.B(p.a, pts)
    if base == "f_star":
        phi = phi_angle_grid(p, pts)
        f, fp, _, _ = _fields_from_phi(p.a, p.K, pts, phi)
        u, du = f * hv, fp * hv + f * dh
        kk = float(k * k)
        rhs_int = (kk - 1.0) * f * f * hv * hv / b + b * f * f * dh * dh
    else:
        bp = profile.B_prime(p.a, pts)
        u, du = b * hv, bp * hv + b * dh
        kk = float(k * k)
        rhs_int = b ** 3 * dh * dh + ((kk - 1.0) * b * b - 2.0 * p.K ** 2) * hv * hv / b
    m = n_quad
    lhs = _full_interval_form(p.a, k, s, w, u[:m], du[:m], geom.coth_r, geom.B_s0, u[m:])
    rhs = float(np.dot(w, rhs_int[:m]))
    return PiconeResult(lhs=lhs, rhs=rhs, residual=abs(lhs - rhs) / (1.0 + abs(lhs)),
                        h_coeffs=tuple(h.coef))


def ambient_fields(a, s):
    """Radial parts and s-derivatives of the four ambient coordinate fields."""
    p = as_param(a)
    s = np.asarray(s, dtype=float)
    phi = phi_angle_grid(p, s)
    b2 = profile.B2(p.a, s)
    b = np.sqrt(b2)
    A = np.sqrt(b2 + 1.0)
    f, _, _, _ = _fields_from_phi(p.a, p.K, s, phi)
    sh2 = np.sinh(2.0 * s)
    radial = [A * np.cosh(phi), A * np.sinh(phi), b, b]
    derivs = [f, p.a * sh2 / A * np.sinh(phi) + p.K * np.cosh(phi) / (A * b),
              profile.B_prime(p.a, s), profile.B_prime(p.a, s)]
    return radial, derivs


def ambient_form_matrix(a, n_quad: int = 160, n_theta: int = 32) -> np.ndarray:
    """Second variation on the span of the four ambient coordinate fields.

    Entries are full double integrals over (s, theta): Gauss-Legendre in s,
    the periodic trapezoidal rule in theta.
    """
    p = as_param(a)
    geom = solve_s0(p)
    s, w = _gauss_nodes(geom.s0, n_quad)
    pts = np.concatenate([s, [geom.s0, -geom.s0]])
    radial, derivs = ambient_fields(p, pts)
    th = np.linspace(0.0, 2 * np.pi, n_theta, endpoint=False)
    dth = 2 * np.pi / n_theta
    ang = [np.ones_like(th), np.ones_like(th), np.cos(th), np.sin(th)]
    dang = [np.zeros_like(th), np.zeros_like(th), -np.sin(th), np.cos(th)]
    b = profile.B(p.a, s)
    w0 = profile.W(p.a, s, 0)
    m = n_quad
    out = np.zeros((4, 4))
    for i in range(4):
        for j in range(4):
            t_aa = dth * np.dot(ang[i], ang[j])
            t_dd = dth * np.dot(dang[i], dang[j])
            ui, uj = radial[i][:m], radial[j][:m]
            di, dj = derivs[i][:m], derivs[j][:m]
            bulk = t_aa * np.dot(w, b * (di * dj - w0 * ui * uj)) + t_dd * np.dot(w, ui * uj / b)
            bdry = t_aa * geom.coth_r * geom.B_s0 * (radial[i][m] * radial[j][m]
                                                    + radial[i][m + 1] * radial[j][m + 1])
            out[i, j] = bulk - bdry
    return out
