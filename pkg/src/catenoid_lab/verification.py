"""The invariant suite behind ``catenoid-lab verify``.

Each check is either an ``invariant`` (a proven identity or inequality; a
failure makes ``verify`` exit nonzero) or ``evidence`` (a conjectured
statement that is tabulated but never fails the run).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import asymptotics, boundary_geometry as bg, conditions, jacobi_fields as jf, profile
from . import robin_spectrum as rs
from .profile import as_param

PICONE_SEED = 20240611


@dataclass(frozen=True)
class Check:
    name: str
    value: float
    threshold: float
    passed: bool
    kind: str = "invariant"
    a: float | None = None


def _lt(name, value, threshold, a=None, kind="invariant"):
    value = float(value)
    return Check(name, value, threshold, bool(value < threshold), kind, a)


def _holds(name, ok, value=float("nan"), a=None, kind="invariant"):
    return Check(name, float(value), 0.0, bool(ok), kind, a)


def constant_checks() -> list[Check]:
    c = asymptotics.compute_constants()
    rebuilt = asymptotics.c0_by_expansion(c)
    svals = np.random.default_rng(PICONE_SEED).uniform(0.1, 6.0, 20)
    return [
        _lt("sigma_star_equation", abs(c.sigma_star - 1 / math.tanh(c.sigma_star)), 1e-14),
        _lt("c_star_two_forms", abs(c.c_star - (c.rho_star + 1 / c.rho_star)), 1e-13),
        _holds("rho_star_gt_1_and_cosh2_gt_2", c.rho_star > 1 and c.y_half_limit > 2, c.rho_star),
        _lt("C0_expansion_route", abs(rebuilt["C0"] - c.C0) / c.C0, 1e-12),
        _lt("xi1_expansion_route", abs(rebuilt["xi1"] - c.xi1) / abs(c.xi1), 1e-12),
        _lt("factorization", max(asymptotics.factorization_residual(s) for s in svals), 1e-12),
        _lt("gamma_reflection", asymptotics.reflection_residual(), 1e-11),
        _holds("C0_positive", c.C0 > 0, c.C0),
    ]


def point_checks(a) -> list[Check]:
    p = as_param(a)
    av = p.a
    out: list[Check] = []
    geom = bg.solve_s0(p)
    s_grid = np.linspace(0.0, geom.s0, 50)
    mori = max(abs(profile.mori_residual(p, s)) / (1 + 2 * float(profile.B2(av, s))) for s in s_grid)
    curv = max(abs(profile.curvature_residual(p, s)) for s in s_grid)
    out += [
        _lt("mori_identity", mori, 1e-11, av),
        _lt("curvature_identity", curv, 1e-10, av),
        _lt("fbc_residual", abs(geom.fbc_residual), 1e-12, av),
        _lt("coth_identity", bg.coth_identity_residual(geom), 1e-10, av),
        _lt("pinching_identity", bg.pinching_identity_residual(geom), 1e-9, av),
        _lt("H_y_identity", bg.hy_identity_residual(geom), 1e-9, av),
        _holds("y_gt_2_iff_G", (geom.y > 2) == (geom.sinh_r - 2 * p.K > 0), geom.y, av),
    ]
    deriv = bg.geometry_derivatives(p)
    out.append(_lt("derivative_identity", deriv.identity_residual, 1e-6, av))

    phi = jf.integrate_phi_a(p, 401)
    w = jf.wronskian(p, phi)
    out.append(_lt("wronskian_constant", np.max(np.abs(w + av / p.K)) / (av / p.K), 1e-7, av))
    for d in jf.robin_defects(p, phi):
        out.append(_lt(f"robin_defect_{d.field_label}", d.rel_deviation, 1e-6, av))
    margin = bg.pinching_margin(geom)
    if abs(margin) > 1e-6 * geom.B2_s0:
        closed = jf.phi_s0_closed(p, deriv.r_prime)
        phi_end = float(phi.values[-1])
        out.append(_lt("phi_s0_closed_vs_ode", abs(closed - phi_end) / abs(phi_end), 1e-6, av))
        out.append(_holds("sign_phi_s0_eq_sign_Hprime", np.sign(phi_end) == np.sign(deriv.H_prime),
                          phi_end, av))
        if phi_end > 0:
            out.append(_holds("phi_a_no_interior_zero", phi.interior_sign_changes() == 0,
                              phi.interior_sign_changes(), av))

    reports = {}
    for k in range(4):
        for par in rs.PARITIES:
            rep = rs.eigenvalues(p, rs.ModeSector(k, par), n_max=1)
            reports[(k, par)] = rep
            out.append(_holds(f"count_agreement_k{k}_{par}", rep.counts_agree,
                              rep.negative_count - rep.shooting_count, av))
    b2 = geom.B2_s0
    out.append(_lt("kernel_mode1_odd", abs(reports[(1, "odd")].eigenvalues[0]), 1e-7, av))
    out.append(_holds("mode0_even_negative", reports[(0, "even")].eigenvalues[0] < 0,
                      reports[(0, "even")].eigenvalues[0], av))
    out.append(_holds("mode0_odd_negative", reports[(0, "odd")].eigenvalues[0] < 0,
                      reports[(0, "odd")].eigenvalues[0], av))
    shift_gap = math.inf
    for k in (2, 3):
        for par in rs.PARITIES:
            for n in (0, 1):
                bound = reports[(1, par)].eigenvalues[n] + (k * k - 1) / b2
                shift_gap = min(shift_gap, reports[(k, par)].eigenvalues[n] - bound)
    out.append(_holds("sturm_shift", shift_gap > -1e-7, shift_gap, av))
    e0, o0 = reports[(0, "even")].eigenvalues, reports[(0, "odd")].eigenvalues
    out.append(_holds("mode0_interlacing", e0[0] < o0[0] < e0[1] < o0[1], e0[1] - o0[0], av))
    if av <= 1.0:
        out.append(_holds("E_condition", reports[(2, "even")].eigenvalues[0] > 0,
                          reports[(2, "even")].eigenvalues[0], av))

    mat = rs.ambient_form_matrix(p)
    diag = np.diag(mat)
    off = np.max(np.abs(mat - np.diag(diag))) / np.max(np.abs(diag))
    out.append(_holds("ambient_diagonal_negative", bool(np.all(diag < 0)), float(np.max(diag)), av))
    out.append(_lt("ambient_off_diagonal", off, 1e-8, av))

    table = conditions.index_nullity(p)
    out.append(_holds("index_at_least_4", table.ind_total >= 4, table.ind_total, av))
    out.append(_holds("index_equals_4", table.ind_total == 4, table.ind_total, av, kind="evidence"))
    out.append(_holds("nullity_equals_2", table.nul_range == (2, 2), table.nul_total, av, kind="evidence"))

    rng = np.random.default_rng(PICONE_SEED)
    worst = 0.0
    for base in ("f_star", "B"):
        for _ in range(20):
            k = int(rng.integers(0, 4))
            coeffs = rng.normal(size=int(rng.integers(1, 6)))
            worst = max(worst, rs.picone_check(p, k, base, coeffs).residual)
    out.append(_lt("picone_identities", worst, 1e-6, av))

    hardy = conditions.hardy_report(p)
    ints = (hardy.I_V, hardy.K_star, hardy.I_V_plus, hardy.K_star_plus)
    out.append(_holds("hardy_integrals_nonnegative", min(ints) >= 0, min(ints), av))
    if av <= 1.0:
        out.append(_holds("hardy_degenerate_zero", hardy.I_V == 0 and hardy.K_star == 0 and hardy.holds,
                          hardy.I_V, av))
    return out


def run_suite(a_values) -> list[Check]:
    checks = constant_checks()
    for a in a_values:
        checks += point_checks(a)
    return checks
