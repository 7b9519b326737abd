"""Jacobi fields on the catenoid: the rotation field f_star, the boost field
u_star (both closed form), and the parametric field phi_a obtained by
integrating the mode-0 Jacobi equation."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from . import profile
from .boundary_geometry import geometry_derivatives, phi_angle, phi_angle_grid, pinching_margin, solve_s0
from .errors import DegenerateDenominatorError, IntegrationError
from .profile import as_param
from .tolerances import current


@dataclass(frozen=True)
class GridFunction:
    """Radial function sampled on [0, s0] together with its s-derivative."""

    nodes: np.ndarray
    values: np.ndarray
    derivs: np.ndarray
    label: str = ""
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        values = np.asarray(self.values, dtype=float)
        derivs = np.asarray(self.derivs, dtype=float)
        if not (nodes.shape == values.shape == derivs.shape) or nodes.ndim != 1 or nodes.size < 2:
            raise ValueError("nodes, values and derivs must be 1-d arrays of equal length >= 2")
        if nodes[0] != 0.0 or np.any(np.diff(nodes) <= 0):
            raise ValueError("nodes must start at 0 and be strictly increasing")
        if not (np.all(np.isfinite(values)) and np.all(np.isfinite(derivs))):
            raise ValueError("grid function has non-finite samples")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "derivs", derivs)

    @property
    def end(self) -> float:
        return float(self.nodes[-1])

    def interior_sign_changes(self) -> int:
        v = self.values[1:-1]
        v = v[v != 0.0]
        return int(np.count_nonzero(np.signbit(v[1:]) != np.signbit(v[:-1])))


@dataclass(frozen=True)
class RobinDefect:
    field_label: str
    value_at_s0: float
    expected: float
    rel_deviation: float


def closed_fields_grid(a, s) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """f_star, f_star', u_star, u_star' at many points (signed s allowed)."""
    p = as_param(a)
    s = np.asarray(s, dtype=float)
    phi = phi_angle_grid(p, s)
    return _fields_from_phi(p.a, p.K, s, phi)


def _fields_from_phi(a: float, k: float, s, phi):
    b2 = profile.B2(a, s)
    b = np.sqrt(b2)
    A = np.sqrt(b2 + 1.0)
    sh2 = np.sinh(2.0 * s)
    ch2 = np.cosh(2.0 * s)
    # f_star = g' for g = A cosh(phi)
    f = (a * b * sh2 * np.cosh(phi) + k * np.sinh(phi)) / (A * b)
    bp = a * sh2 / b
    fp = 2.0 * A * np.cosh(phi) - bp / b * f
    u = -a * sh2 / b
    up = -a * (2.0 * ch2 * b2 - a * sh2 * sh2) / (b2 * b)
    return f, fp, u, up


def closed_fields(a, s: float) -> tuple[float, float, float, float]:
    p = as_param(a)
    s = float(s)
    if s < 0:
        raise ValueError("closed_fields expects s >= 0")
    phi = phi_angle(p, s)
    return tuple(float(x) for x in _fields_from_phi(p.a, p.K, s, phi))


def _mode0_rhs(a: float, scale: float):
    def rhs(x, y):
        s = scale * x
        b2 = float(profile.B2(a, s))
        bp_over_b = a * math.sinh(2.0 * s) / b2
        ii2 = 2.0 * (a - 0.5) * (a + 0.5) / (b2 * b2)
        return [scale * y[1], scale * (-bp_over_b * y[1] - (ii2 - 2.0) * y[0])]
    return rhs


def integrate_phi_a(a, n_nodes: int = 201) -> GridFunction:
    """Integrate u'' + (B'/B) u' + (|II|^2 - 2) u = 0, u(0) = 1/(2K), u'(0) = 0."""
    p = as_param(a)
    if n_nodes < 32:
        raise ValueError("n_nodes must be at least 32")
    if math.sqrt(p.a - 0.5) <= 1e-8:
        raise IntegrationError("B(0) below 1e-8; use the rescaled variable")
    geom = solve_s0(p)
    tol = current()
    scale = p.length_scale
    nodes = np.linspace(0.0, geom.s0, n_nodes)
    sol = solve_ivp(_mode0_rhs(p.a, scale), (0.0, geom.s0 / scale), [1.0 / (2.0 * p.K), 0.0],
                    method="DOP853", t_eval=nodes / scale, rtol=tol.ode_rel, atol=tol.ode_abs * 1e-2)
    if not sol.success:
        raise IntegrationError(f"phi_a integration failed at a={p.a}: {sol.message}")
    values = sol.y[0]
    derivs = sol.y[1]
    return GridFunction(nodes, values, derivs, label="phi_a",
                        meta={"a": p.a, "steps": int(sol.t.size), "nfev": int(sol.nfev)})


def closed_grid_function(a, n_nodes: int = 201, which: str = "f_star") -> GridFunction:
    p = as_param(a)
    geom = solve_s0(p)
    nodes = np.linspace(0.0, geom.s0, n_nodes)
    f, fp, u, up = closed_fields_grid(p, nodes)
    if which == "f_star":
        return GridFunction(nodes, f, fp, label="f_star")
    if which == "u_star":
        return GridFunction(nodes, u, up, label="u_star")
    raise ValueError(f"unknown closed field {which!r}")


def wronskian(a, phi: GridFunction) -> np.ndarray:
    """W(s) = B (phi_a u_star' - phi_a' u_star); constant, equal to -a/K."""
    p = as_param(a)
    s = phi.nodes
    b = profile.B(p.a, s)
    sh2 = np.sinh(2.0 * s)
    u = -p.a * sh2 / b
    up = -p.a * (2.0 * np.cosh(2.0 * s) * b * b - p.a * sh2 * sh2) / b ** 3
    return b * (phi.values * up - phi.derivs * u)


def phi_s0_closed(a, r_prime: float) -> float:
    """Boundary value of phi_a from r'(a): a [K^2 r' sinh 2s0 - B^2] / (K [B^2 - 2K^2])."""
    p = as_param(a)
    geom = solve_s0(p)
    margin = pinching_margin(geom)
    if abs(margin) < 1e-8 * geom.B2_s0:
        raise DegenerateDenominatorError(
            f"B(s0)^2 - 2K^2 = {margin:.3e} is within 1e-8 B^2 of zero at a={p.a}", margin)
    k = p.K
    return p.a * (k * k * r_prime * math.sinh(2.0 * geom.s0) - geom.B2_s0) / (k * margin)


def robin_defects(a, phi: GridFunction | None = None) -> list[RobinDefect]:
    """Ru(s0) = u'(s0) - coth r u(s0) for f_star, u_star and phi_a."""
    p = as_param(a)
    geom = solve_s0(p)
    f, fp, u, up = closed_fields(p, geom.s0)
    if phi is None:
        phi = integrate_phi_a(p)
    rp = geometry_derivatives(p).r_prime
    k = p.K
    b2 = geom.B2_s0
    rows = [
        ("f_star", fp - geom.coth_r * f, 0.0, geom.cosh_r),
        ("u_star", up - geom.coth_r * u, pinching_margin(geom) / (b2 * geom.B_s0), None),
        ("phi_a", float(phi.derivs[-1] - geom.coth_r * phi.values[-1]), -rp * k / b2, None),
    ]
    out = []
    for label, value, expected, scale in rows:
        denom = scale if scale is not None else max(abs(expected), 1e-300)
        out.append(RobinDefect(label, float(value), float(expected), abs(value - expected) / denom))
    return out
