"""Named conditions and the index/nullity table.

``evaluate_conditions`` gathers, at one a, the pinching margin (sinh r vs 2K),
the mode-2 and mode-0 spectral values, the sign of H'(a), positivity of the
parametric Jacobi field and the Hardy-type integrals. ``index_nullity`` turns
the per-sector shooting counts into Morse index and nullity.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from . import profile
from .boundary_geometry import geometry_derivatives, pinching_margin, solve_s0, sV_threshold
from .errors import NumericalFailure, QuadratureError
from .jacobi_fields import integrate_phi_a
from .profile import as_param
from .robin_spectrum import ModeSector, eigenvalues, shooting_count
from .tolerances import current

SIGN_LEDGER_MARGIN = 1e-6


@dataclass(frozen=True)
class HardyReport:
    a: float
    sV: float
    sV_defined: bool
    I_V: float
    K_star: float
    I_V_plus: float
    K_star_plus: float
    cond1: bool
    cond2: bool
    ratio1: float
    ratio2: float

    @property
    def holds(self) -> bool:
        return self.cond1 and self.cond2


@dataclass(frozen=True)
class ConditionReport:
    a: float
    H: float
    y: float
    G_margin: float
    G_margin_alt: float
    E_value: float
    Fprime_value: float
    Hprime: float
    phi_s0: float
    phi_positive: bool
    phi_interior_zeros: int
    hardy: HardyReport
    consistent: bool
    mode0_kernel_margin: float


@dataclass(frozen=True)
class ModeContribution:
    k: int
    parity: str
    negative: int
    multiplicity: int
    kernel: bool
    kernel_proven: bool
    source: str


@dataclass(frozen=True)
class IndexTable:
    a: float
    per_mode: tuple
    ind_total: int
    nul_total: int
    nul_range: tuple
    truncation_k: int
    truncation_margin: float
    status: str
    flags: tuple = field(default=())


@dataclass(frozen=True)
class AStarScan:
    value: float
    unsaturated: bool
    bracket: tuple
    ratios: tuple


# -- Hardy integrals ---------------------------------------------------------

def _q(f, lo, hi, label: str) -> float:
    if hi <= lo:
        return 0.0
    tol = current()
    value, err, *rest = quad(f, lo, hi, epsabs=tol.quad_abs, epsrel=tol.quad_rel, limit=200, full_output=1)
    if len(rest) > 1 and err > 100 * max(tol.quad_abs, tol.quad_rel * abs(value)):
        raise QuadratureError(f"{label}: {rest[1]}", err)
    return value


def hardy_report(a) -> HardyReport:
    """Hardy-type integrals of V = 3B^2 - 2K^2 split at its sign change sV."""
    p = as_param(a)
    geom = solve_s0(p)
    k2 = p.K ** 2
    sV, sV_ok = sV_threshold(p)
    s0 = geom.s0
    sV = min(sV, s0)

    def v_over_b(t):
        b2 = float(profile.B2(p.a, t))
        return (3.0 * b2 - 2.0 * k2) / math.sqrt(b2)

    def inv_b3(t):
        return float(profile.B2(p.a, t)) ** -1.5

    I_V = _q(lambda t: abs(v_over_b(t)), 0.0, sV, "I_V")
    K_star = _q(lambda t: _q(lambda u: abs(v_over_b(u)), 0.0, t, "I_V inner") * inv_b3(t), 0.0, sV, "K_star")
    I_V_plus = _q(v_over_b, sV, s0, "I_V_plus")
    K_star_plus = _q(lambda t: _q(v_over_b, t, s0, "I_V_plus inner") * inv_b3(t), sV, s0, "K_star_plus")
    ratio1 = 2.0 * K_star
    ratio2 = 2.0 * I_V * (1.0 + K_star_plus) / I_V_plus if I_V_plus > 0 else math.inf
    return HardyReport(a=p.a, sV=sV, sV_defined=sV_ok, I_V=I_V, K_star=K_star, I_V_plus=I_V_plus,
                       K_star_plus=K_star_plus, cond1=ratio1 < 1.0, cond2=ratio2 < 1.0,
                       ratio1=ratio1, ratio2=ratio2)


def default_A_star_grid(n: int = 64, upper: float = 4.0) -> np.ndarray:
    # log-spaced on (1, upper]: exclude a = 1 itself where the interval is empty
    return np.logspace(0.0, math.log10(upper), n + 1)[1:]


def scan_A_star(a_grid=None, resolution: float = 1e-4) -> AStarScan:
    """Largest a on the grid where both Hardy conditions hold, bisected to ``resolution``."""
    grid = default_A_star_grid() if a_grid is None else np.asarray(a_grid, dtype=float)
    if grid.size == 0 or np.any(np.diff(grid) <= 0) or grid[0] <= 1.0 or grid[-1] > 10.0:
        raise ValueError("A_star grid must be ascending within (1, 10]")
    last_true, ratios = None, []
    for a in grid:
        rep = hardy_report(float(a))
        ratios.append((float(a), rep.ratio1, rep.ratio2))
        if not rep.holds:
            if last_true is None:
                return AStarScan(value=1.0, unsaturated=False, bracket=(1.0, float(a)), ratios=tuple(ratios))
            lo, hi = last_true, float(a)
            while hi - lo > resolution:
                mid = 0.5 * (lo + hi)
                if hardy_report(mid).holds:
                    lo = mid
                else:
                    hi = mid
            return AStarScan(value=lo, unsaturated=False, bracket=(lo, hi), ratios=tuple(ratios))
        last_true = float(a)
    return AStarScan(value=float(grid[-1]), unsaturated=True, bracket=(float(grid[-1]), math.inf),
                     ratios=tuple(ratios))


# -- condition report --------------------------------------------------------

def evaluate_conditions(a) -> ConditionReport:
    p = as_param(a)
    geom = solve_s0(p)

    def stage(label, fn):
        try:
            return fn()
        except NumericalFailure as exc:
            raise NumericalFailure(f"{label} at a={p.a}: {exc}", label) from exc

    deriv = stage("H'(a)", lambda: geometry_derivatives(p))
    e_rep = stage("mode-2 spectrum", lambda: eigenvalues(p, ModeSector(2, "even"), n_max=0))
    f_rep = stage("mode-0 spectrum", lambda: eigenvalues(p, ModeSector(0, "even"), n_max=1))
    o_rep = stage("mode-0 odd spectrum", lambda: eigenvalues(p, ModeSector(0, "odd"), n_max=1))
    phi = stage("phi_a", lambda: integrate_phi_a(p, 401))
    hardy = stage("hardy integrals", lambda: hardy_report(p))
    margin_alt = pinching_margin(geom)
    phi_end = float(phi.values[-1])
    zeros = phi.interior_sign_changes()
    phi_pos = bool(np.all(phi.values > 0))
    if abs(margin_alt) > SIGN_LEDGER_MARGIN * geom.B2_s0:
        consistent = (np.sign(phi_end) == np.sign(deriv.H_prime)) and ((phi_end > 0) == phi_pos)
    else:
        consistent = True
    mode0 = f_rep.eigenvalues + o_rep.eigenvalues
    return ConditionReport(
        a=p.a, H=geom.H, y=geom.y,
        G_margin=geom.sinh_r - 2.0 * p.K, G_margin_alt=margin_alt,
        E_value=e_rep.eigenvalues[0], Fprime_value=f_rep.eigenvalues[1],
        Hprime=deriv.H_prime, phi_s0=phi_end, phi_positive=phi_pos, phi_interior_zeros=zeros,
        hardy=hardy, consistent=bool(consistent),
        mode0_kernel_margin=float(min(abs(m) for m in mode0)),
    )


# -- index and nullity -------------------------------------------------------

def index_nullity(a, k_max_hint: int = 3) -> IndexTable:
    """Morse index and nullity from shooting counts with m_0 = 1, m_k = 2.

    Modes above k=2 are covered by the Sturm shift once
    mu_0^even(2) + (k^2 - 4)/B(s0)^2 > 0; the table records that margin.
    """
    p = as_param(a)
    geom = solve_s0(p)
    rows, flags = [], []
    ind = 0
    nul_lo = nul_hi = 0
    e_rep = eigenvalues(p, ModeSector(2, "even"), n_max=0)
    mu_e2 = e_rep.eigenvalues[0]
    sectors = [(0, "even"), (0, "odd"), (1, "even"), (1, "odd"), (2, "even")]
    sectors += [(k, par) for k in range(3, max(3, k_max_hint) + 1) for par in ("even",)]
    for k, par in sectors:
        sc = shooting_count(p, ModeSector(k, par))
        mult = 1 if k == 0 else 2
        proven_kernel = (k, par) == (1, "odd")
        ind += sc.N_minus * mult
        if sc.ambiguous:
            if proven_kernel:
                nul_lo += mult
                nul_hi += mult
            else:
                nul_hi += mult
                flags.append(f"kernel proximity in k={k}/{par}")
        elif proven_kernel:
            flags.append("mode-1 odd kernel not resolved by shooting")
        rows.append(ModeContribution(k=k, parity=par, negative=sc.N_minus, multiplicity=mult,
                                     kernel=sc.ambiguous, kernel_proven=proven_kernel,
                                     source="shooting"))
    # odd mode-2 lies above even mode-2 in the Sturm order, so it adds nothing when E holds
    if mu_e2 <= 0:
        flags.append("mode-2 even ground state not positive; odd mode-2 not certified")
    trunc_k = max(2, k_max_hint)
    margin = mu_e2 + ((trunc_k + 1) ** 2 - 4) / geom.B2_s0
    if margin <= 0:
        flags.append("Sturm-shift truncation margin not positive")
    status = "proven regime" if p.a - 0.5 <= 0.02 else "numerical evidence"
    return IndexTable(a=p.a, per_mode=tuple(rows), ind_total=ind, nul_total=nul_lo,
                      nul_range=(nul_lo, nul_hi), truncation_k=trunc_k, truncation_margin=margin,
                      status=status, flags=tuple(flags))
