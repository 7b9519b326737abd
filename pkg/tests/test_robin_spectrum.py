import math

import numpy as np
import pytest
from numpy.polynomial import Polynomial

from catenoid_lab import boundary_geometry as bg, jacobi_fields as jf, profile
from catenoid_lab import robin_spectrum as rs
from catenoid_lab.robin_spectrum import ModeSector

from oracle_values import EIGENVALUES, FORM_CONST_1


def test_sector_validation():
    with pytest.raises(ValueError):
        ModeSector(-1, "even")
    with pytest.raises(ValueError):
        ModeSector(1, "both")


@pytest.mark.parametrize("key", sorted(EIGENVALUES))
def test_eigenvalues_against_collocation(key):
    a, k, par = key
    rep = rs.eigenvalues(a, ModeSector(k, par), n_max=1)
    for mine, ref in zip(rep.eigenvalues, EIGENVALUES[key]):
        assert mine == pytest.approx(ref, rel=1e-7, abs=1e-8)


def test_spectral_examples_a1():
    assert abs(rs.eigenvalues(1.0, ModeSector(1, "odd"), 0).eigenvalues[0]) < 1e-7
    b2 = bg.solve_s0(1.0).B2_s0
    assert rs.eigenvalues(1.0, ModeSector(2, "odd"), 0).eigenvalues[0] >= 3 / b2
    assert rs.eigenvalues(1.0, ModeSector(0, "even"), 0).eigenvalues[0] < 0


def test_eigenvalues_increasing_and_node_count():
    a = 0.8
    sec = ModeSector(0, "even")
    rep = rs.eigenvalues(a, sec, n_max=3)
    assert np.all(np.diff(rep.eigenvalues) > 0)
    for n, mu in enumerate(rep.eigenvalues):
        u = rs.eigenfunction(a, sec, mu)
        assert u.interior_sign_changes() == n
        g = bg.solve_s0(a)
        # the eigenfunction satisfies the Robin condition at s0
        assert u.derivs[-1] - g.coth_r * u.values[-1] == pytest.approx(0, abs=1e-6 * np.max(np.abs(u.values)))


def test_n_max_bounds():
    with pytest.raises(ValueError):
        rs.eigenvalues(1.0, ModeSector(0, "even"), n_max=9)


def test_kernel_flag_only_on_mode1_odd():
    for k in range(3):
        for par in rs.PARITIES:
            rep = rs.eigenvalues(1.0, ModeSector(k, par), 1)
            assert rep.near_kernel == ((k, par) == (1, "odd"))


@pytest.mark.parametrize("k,par,expected", [(0, "even", (0, 1, 1)), (0, "odd", (0, 1, 1)), (2, "odd", (0, 0, 0))])
def test_shooting_examples_a1(k, par, expected):
    sc = rs.shooting_count(1.0, ModeSector(k, par))
    assert (sc.n_z, sc.delta, sc.N_minus) == expected


def test_shooting_mode1_odd_is_ambiguous_kernel():
    sc = rs.shooting_count(1.0, ModeSector(1, "odd"))
    assert sc.ambiguous and sc.N_minus == 0


def test_shooting_counts_zeros_of_excited_solution():
    # at a large shifted energy the solution oscillates; check the counter on a known case
    a = 1.0
    prob = rs._Sector(a, ModeSector(0, "odd"))
    mu = rs.eigenvalues(a, ModeSector(0, "odd"), 2).eigenvalues[2] + 1e-3
    psi = prob.solution(mu)
    assert len(rs._locate_zeros(psi)) == 2


def test_quadratic_form_kernel_and_positive():
    a = 1.0
    f = jf.closed_grid_function(a, 2001, "f_star")
    val = rs.quadratic_form(a, 1, f)
    scale = 2 * np.trapezoid(profile.B(a, f.nodes) * f.derivs ** 2, f.nodes)
    assert abs(val) < 1e-6 * scale
    nodes = f.nodes
    b = jf.GridFunction(nodes, profile.B(a, nodes), profile.B_prime(a, nodes), "B")
    assert rs.quadratic_form(a, 2, b) > 0


def test_quadratic_form_constant_against_oracle():
    a = 1.0
    nodes = np.linspace(0, bg.solve_s0(a).s0, 2001)
    one = jf.GridFunction(nodes, np.ones_like(nodes), np.zeros_like(nodes), "one")
    assert rs.quadratic_form(a, 0, one) == pytest.approx(FORM_CONST_1, rel=1e-10)


def test_quadratic_form_rejects_wrong_interval():
    one = jf.GridFunction([0.0, 0.5], [1.0, 1.0], [0.0, 0.0])
    with pytest.raises(ValueError):
        rs.quadratic_form(1.0, 0, one)


def test_picone_examples():
    assert rs.picone_check(1.0, 1, "f_star", [1.0]).residual < 1e-8
    assert rs.picone_check(1.0, 1, "f_star", [1.0]).rhs == pytest.approx(0.0, abs=1e-12)
    assert rs.picone_check(1.0, 2, "f_star", [0.0, 1.0]).residual < 1e-6
    res = rs.picone_check(1.0, 2, "B", [1.0])
    g = bg.solve_s0(1.0)
    s = np.linspace(-g.s0, g.s0, 20001)
    b = profile.B(1.0, s)
    direct = np.trapezoid((3 * b * b - 2 * 0.75) / b, s)
    assert res.rhs == pytest.approx(direct, rel=1e-7)
    assert res.rhs >= 0


def test_neumann_projection():
    q = Polynomial([0.3, -1.0, 2.0, 0.5, -0.7])
    h = rs.neumann_projection(q, 0.8)
    assert h.deriv()(0.8) == pytest.approx(0, abs=1e-14)
    assert h.deriv()(-0.8) == pytest.approx(0, abs=1e-14)
    even = Polynomial([1.0, 0.0, 3.0])
    h_even = rs.neumann_projection(even, 0.5)
    assert h_even.deriv()(0.5) == pytest.approx(0, abs=1e-14)
    assert h_even.deriv()(-0.5) == pytest.approx(0, abs=1e-14)


def test_picone_dual_quadrature():
    # the Gauss-Legendre evaluation agrees with a much denser rule
    coeffs = [0.2, -0.5, 1.0, 0.3]
    assert rs.picone_check(0.9, 2, "f_star", coeffs, n_quad=80).lhs == pytest.approx(
        rs.picone_check(0.9, 2, "f_star", coeffs, n_quad=400).lhs, rel=1e-12)


def test_picone_bad_base():
    with pytest.raises(ValueError):
        rs.picone_check(1.0, 1, "A", [1.0])


@pytest.mark.parametrize("a", [1.0, 2.0])
def test_ambient_form_matrix(a):
    m = rs.ambient_form_matrix(a)
    d = np.diag(m)
    assert np.all(d < 0)
    assert np.max(np.abs(m - np.diag(d))) < 1e-8 * np.max(np.abs(d))
    assert d[2] == pytest.approx(d[3], rel=1e-12)


def test_ambient_entry_00_closed_form():
    a = 1.0
    g = bg.solve_s0(a)
    s = np.linspace(-g.s0, g.s0, 40001)
    phi = bg.phi_angle_grid(a, s)
    b2 = profile.B2(a, s)
    phi0 = np.sqrt(b2 + 1) * np.cosh(phi)
    integral = 2 * np.pi * np.trapezoid(profile.II2(a, s) * phi0 ** 2 * np.sqrt(b2), s)
    expected = -integral - 4 * np.pi * g.B_s0 * g.coth_r
    assert rs.ambient_form_matrix(a)[0, 0] == pytest.approx(expected, rel=1e-7)


def test_ambient_spatial_entries_closed_form():
    a = 1.3
    g = bg.solve_s0(a)
    s = np.linspace(-g.s0, g.s0, 40001)
    phi = bg.phi_angle_grid(a, s)
    b2 = profile.B2(a, s)
    w = profile.II2(a, s) * np.sqrt(b2)
    m = rs.ambient_form_matrix(a)
    assert m[1, 1] == pytest.approx(-2 * np.pi * np.trapezoid(w * (b2 + 1) * np.sinh(phi) ** 2, s), rel=1e-7)
    assert m[2, 2] == pytest.approx(-np.pi * np.trapezoid(w * b2, s), rel=1e-7)
