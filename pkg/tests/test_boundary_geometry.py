import math

import numpy as np
import pytest

from catenoid_lab import boundary_geometry as bg
from catenoid_lab.tolerances import use_tolerances

from oracle_values import GEOMETRY, PHI_075_04_MP, PHI_075_04_SIMPSON, RHO_STAR, C0


def test_phi_zero_and_monotone():
    assert bg.phi_angle(1.3, 0.0) == 0.0
    vals = [bg.phi_angle(1.3, s) for s in np.linspace(0.01, 2, 20)]
    assert np.all(np.diff(vals) > 0)


def test_phi_upper_bound_a1():
    s = 0.5
    K = math.sqrt(0.75)
    assert bg.phi_angle(1.0, s) < s * K / (1.5 * math.sqrt(0.5))


def test_phi_against_dense_simpson():
    val = bg.phi_angle(0.75, 0.4)
    assert val == pytest.approx(PHI_075_04_SIMPSON, abs=1e-11)
    assert val == pytest.approx(PHI_075_04_MP, rel=1e-12)


def test_phi_grid_matches_scalar():
    nodes = np.array([-0.3, 0.0, 0.1, 0.7, 0.2])
    grid = bg.phi_angle_grid(1.1, nodes)
    for s, v in zip(nodes, grid):
        assert v == pytest.approx(math.copysign(bg.phi_angle(1.1, abs(s)), s), abs=1e-14)


@pytest.mark.parametrize("a", sorted(GEOMETRY))
def test_geometry_against_extended_precision(a):
    ref = GEOMETRY[a]
    g = bg.solve_s0(a)
    assert g.s0 == pytest.approx(ref["s0"], rel=1e-12)
    assert g.r == pytest.approx(ref["r"], rel=1e-11)
    assert g.H == pytest.approx(ref["H"], rel=1e-11)
    assert g.y == pytest.approx(ref["y"], rel=1e-11)
    assert g.coth_r == pytest.approx(ref["coth_r"], rel=1e-11)
    assert abs(g.fbc_residual) < 1e-12


def test_s0_degenerate_scaling():
    a = 0.5 + 1e-4
    g = bg.solve_s0(a)
    assert g.s0 / math.sqrt(1e-4) == pytest.approx(RHO_STAR, rel=1e-2)


def test_near_degenerate_uses_rescaled_path():
    a = 0.5 + 5e-5
    g = bg.solve_s0(a)
    assert g.near_degenerate
    assert abs(g.fbc_residual) < 1e-12
    assert g.s0 / math.sqrt(5e-5) == pytest.approx(RHO_STAR, rel=1e-3)


def test_s0_exceeds_G_threshold_at_1():
    g = bg.solve_s0(1.0)
    assert g.sG == pytest.approx(0.5 * math.acosh(2.0))
    assert g.sG == pytest.approx(0.658479, abs=1e-6)
    assert g.s0 > g.sG


def test_s0_by_sign_change_scan():
    # independent oracle: march at step 1e-3, then bisect on the FBC
    a = 1.0
    s = 0.1
    while bg.fbc_residual(a, s) < 0:
        s += 1e-3
    lo, hi = s - 1e-3, s
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if bg.fbc_residual(a, mid) < 0:
            lo = mid
        else:
            hi = mid
    assert bg.solve_s0(a).s0 == pytest.approx(0.5 * (lo + hi), abs=1e-13)


def test_single_sign_change():
    for a in (0.52, 1.0, 3.0):
        s = np.linspace(1e-3, 3 * bg.solve_s0(a).s0, 400)
        f = np.array([bg.fbc_residual(a, x) for x in s])
        assert np.count_nonzero(np.diff(np.sign(f))) == 1


@pytest.mark.parametrize("a", [0.51, 0.75, 1.0, 2.0, 5.0])
def test_identities(a):
    g = bg.solve_s0(a)
    assert bg.coth_identity_residual(g) < 1e-10
    assert bg.pinching_identity_residual(g) < 1e-9
    assert bg.hy_identity_residual(g) < 1e-9
    assert g.y > 1
    assert (g.y > 2) == (g.sinh_r > 2 * g.K)


def test_sV_threshold():
    assert bg.sV_threshold(0.9) == (0.0, False)
    assert bg.sV_threshold(1.0)[0] == 0.0
    s, ok = bg.sV_threshold(2.0)
    assert ok and math.cosh(2 * s) == pytest.approx(9 / 6)


def test_derivatives_near_half():
    d = bg.geometry_derivatives(0.5 + 1e-3)
    assert d.H_prime == pytest.approx(C0, rel=2e-2)
    assert d.identity_residual < 1e-6
    assert d.richardson_order == 4


def test_derivative_large_a():
    d = bg.geometry_derivatives(100.0)
    assert d.r_prime == pytest.approx(1.5 / 100, rel=5e-2)


def test_derivatives_match_independent_fit():
    # five-point stencil at a coarser step as a second route
    a = 1.2
    h = 1e-3
    r = lambda x: bg.solve_s0(x).r
    five = (-r(a + 2 * h) + 8 * r(a + h) - 8 * r(a - h) + r(a - 2 * h)) / (12 * h)
    assert bg.geometry_derivatives(a).r_prime == pytest.approx(five, rel=1e-8)


def test_r_increasing_on_tested_range():
    for a in np.linspace(0.52, 3, 9):
        assert bg.geometry_derivatives(a).r_prime > 0


def test_derivative_step_guard():
    with pytest.raises(Exception):
        bg.geometry_derivatives(0.5 + 1e-5)


def test_tolerance_override_changes_cache_key():
    with use_tolerances(quad_rel=1e-9):
        g_loose = bg.solve_s0(1.0)
    g = bg.solve_s0(1.0)
    assert g.s0 == pytest.approx(g_loose.s0, rel=1e-8)
