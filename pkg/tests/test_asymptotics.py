import math

import pytest

from catenoid_lab import asymptotics as asy

import oracle_values as ov


def test_constants_against_oracle():
    c = asy.compute_constants()
    assert c.sigma_star == pytest.approx(ov.SIGMA_STAR, rel=1e-15)
    assert c.rho_star == pytest.approx(ov.RHO_STAR, rel=1e-14)
    assert c.C0 == pytest.approx(ov.C0, rel=1e-13)
    assert c.xi1 == pytest.approx(ov.XI1, rel=1e-13)
    assert c.d_inf == pytest.approx(ov.D_INF, rel=1e-13)
    assert c.gamma_quarter == pytest.approx(ov.GAMMA_QUARTER, rel=1e-14)


def test_I_star_closed_form_vs_integral():
    assert asy.compute_constants().I_star == pytest.approx(ov.I_STAR_INTEGRAL, rel=1e-13)


def test_derived_constants():
    c = asy.compute_constants()
    assert c.c_star == pytest.approx(c.rho_star + 1 / c.rho_star, rel=1e-14)
    assert c.y_half_limit == pytest.approx(1 + c.s_val, rel=1e-14)
    assert c.y_half_limit > 2
    assert set(c.formulas) >= {"C0", "xi1", "d_inf", "sigma_star"}


def test_gamma():
    assert asy.lanczos_gamma(5.0) == pytest.approx(24.0, rel=1e-14)
    assert asy.lanczos_gamma(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-14)
    assert asy.lanczos_gamma(1.25) == pytest.approx(math.gamma(1.25), rel=1e-14)
    assert asy.reflection_residual() < 1e-13
    with pytest.raises(ValueError):
        asy.lanczos_gamma(0.25)


def test_sigma_star_bad_bracket():
    with pytest.raises(Exception):
        asy.solve_sigma_star(1.5, 2.0)


def test_expansion_route_matches_closed_forms():
    c = asy.compute_constants()
    r = asy.c0_by_expansion(c)
    assert r["xi1"] == pytest.approx(c.xi1, rel=1e-12)
    assert r["C0"] == pytest.approx(c.C0, rel=1e-12)


@pytest.mark.parametrize("s", [0.0, 1.0, 2.2767, 4.0, 17.5])
def test_factorization(s):
    assert asy.factorization_residual(s) < 1e-14


def test_half_endpoint_fits():
    rep = asy.endpoint_checks("half", [0.501, 0.502, 0.505, 0.51])
    assert not rep.warnings
    assert rep.get("H_slope").rel_deviation < 1e-3
    assert rep.get("g_ratio").rel_deviation < 1e-2
    assert rep.get("y_limit").rel_deviation < 0.05
    assert rep.get("s0_over_rho").rel_deviation < 0.01
    with pytest.raises(KeyError):
        rep.get("nope")


def test_half_endpoint_warns_on_small_grid():
    rep = asy.endpoint_checks("half", [0.501, 0.502])
    assert rep.warnings


def test_infinity_endpoint_fits():
    rep = asy.endpoint_checks("infinity", [50.0, 100.0, 150.0, 200.0])
    assert rep.get("r_offset").abs_deviation < 0.01
    assert rep.get("y_over_a").rel_deviation < 0.02
    assert rep.get("a_r_prime").abs_deviation < 0.02


def test_endpoint_input_validation():
    with pytest.raises(ValueError):
        asy.endpoint_checks("middle", [1.0])
    with pytest.raises(ValueError):
        asy.endpoint_checks("half", [0.7, 0.8])
    with pytest.raises(ValueError):
        asy.endpoint_checks("infinity", [5.0])


def test_slope_gap_scaling():
    c = asy.compute_constants()
    d = 1e-3
    assert asy.slope_gap(0.5 + d) / d ** 1.5 == pytest.approx(c.C0, rel=2e-3)


def test_positive_slope_extent():
    assert asy.empirical_positive_slope_extent([0.52, 0.6, 1.0]) == 1.0
