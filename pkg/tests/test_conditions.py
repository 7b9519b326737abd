import math

import numpy as np
import pytest

from catenoid_lab import conditions, boundary_geometry as bg
from catenoid_lab.errors import NumericalFailure

import oracle_values as ov


def test_hardy_against_oracle():
    rep = conditions.hardy_report(1.5)
    assert rep.I_V == pytest.approx(ov.HARDY_1_5_I_V, rel=1e-9)
    assert rep.K_star == pytest.approx(ov.HARDY_1_5_K_STAR, rel=1e-9)
    assert rep.I_V_plus == pytest.approx(ov.HARDY_1_5_I_V_PLUS, rel=1e-9)
    assert rep.K_star_plus == pytest.approx(ov.HARDY_1_5_K_STAR_PLUS, rel=1e-9)
    assert rep.holds


@pytest.mark.parametrize("a", [0.7, 1.0])
def test_hardy_degenerate_for_a_le_1(a):
    rep = conditions.hardy_report(a)
    assert rep.I_V == 0 and rep.K_star == 0
    assert not rep.sV_defined
    assert rep.holds


def test_hardy_just_above_one():
    rep = conditions.hardy_report(1.05)
    assert rep.sV_defined and rep.sV > 0
    assert rep.I_V > 0 and rep.holds


def test_hardy_sign_change_point():
    a = 2.0
    rep = conditions.hardy_report(a)
    b2 = a * math.cosh(2 * rep.sV) - 0.5
    assert 3 * b2 - 2 * (a * a - 0.25) == pytest.approx(0, abs=1e-12)


def test_default_A_star_grid():
    g = conditions.default_A_star_grid()
    assert g[0] > 1 and g[-1] == pytest.approx(4.0)
    assert len(g) == 64 and np.all(np.diff(g) > 0)


def test_scan_A_star_small_grid_saturates():
    scan = conditions.scan_A_star([1.2, 2.0, 3.0])
    assert scan.unsaturated and scan.value == 3.0
    assert len(scan.ratios) == 3


def test_scan_A_star_rejects_bad_grid():
    with pytest.raises(ValueError):
        conditions.scan_A_star([0.9, 2.0])
    with pytest.raises(ValueError):
        conditions.scan_A_star([2.0, 1.5])


def test_evaluate_conditions_a1():
    rep = conditions.evaluate_conditions(1.0)
    assert rep.G_margin > 0
    assert rep.G_margin_alt > 0
    assert rep.E_value > 0
    assert rep.Fprime_value > 0
    assert rep.Hprime > 0 and rep.phi_s0 > 0 and rep.phi_positive
    assert rep.phi_interior_zeros == 0
    assert rep.consistent
    assert rep.mode0_kernel_margin > 1e-3


def test_evaluate_conditions_near_half():
    rep = conditions.evaluate_conditions(0.52)
    assert rep.Hprime > 0 and rep.phi_positive and rep.consistent


def test_evaluate_conditions_stage_error(monkeypatch):
    def boom(*args, **kwargs):
        raise NumericalFailure("forced", "hardy")

    monkeypatch.setattr(conditions, "hardy_report", boom)
    with pytest.raises(NumericalFailure) as info:
        conditions.evaluate_conditions(1.0)
    assert info.value.stage == "hardy integrals"


@pytest.mark.parametrize("a", [0.51, 1.0, 2.5])
def test_index_nullity(a):
    t = conditions.index_nullity(a)
    assert t.ind_total == 4
    assert t.nul_range == (2, 2)
    assert t.truncation_margin > 0
    assert not t.flags
    counts = {(m.k, m.parity): m.negative * m.multiplicity for m in t.per_mode}
    assert counts[(0, "even")] == 1 and counts[(0, "odd")] == 1
    assert counts[(1, "even")] == 2 and counts[(1, "odd")] == 0


def test_index_status_labels():
    assert conditions.index_nullity(0.51).status == "proven regime"
    assert conditions.index_nullity(1.0).status == "numerical evidence"
