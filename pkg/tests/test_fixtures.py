import pytest

from ancrate.bounds import anc_lower_bound, anc_upper_bound
from ancrate.fixtures import (DIAMOND_CROSSOVER, SWAPPED_CROSSOVER, diamond, mac_scenario,
                              power_scaling_family, solve_symmetric_mac, swapped_diamond,
                              width_scaling_family)
from ancrate.mac import classify_mac_dominance


def test_crossovers_frozen():
    # independent closed forms: roots of (a^2 + a)^2 = 2 and a^4 + a^2 = 4
    assert DIAMOND_CROSSOVER == pytest.approx(0.790044015672758, abs=1e-14)
    assert SWAPPED_CROSSOVER == pytest.approx(1.2496210676876531, abs=1e-14)


def test_fixtures_are_labelled_inferred():
    for net in (diamond(), swapped_diamond(), power_scaling_family(2.0), width_scaling_family(3),
                mac_scenario(1), mac_scenario(2), mac_scenario(3)):
        assert "inferred" in net.note


def test_solve_symmetric_mac_exact():
    mac = solve_symmetric_mac(5.0, 3.0)
    w = classify_mac_dominance(mac).noise
    assert w["B2"] == pytest.approx(5.0, rel=1e-12)
    assert w["B11"] == pytest.approx(3.0, rel=1e-12)
    assert w["B12"] == pytest.approx(3.0, rel=1e-12)


def test_scenario_range():
    with pytest.raises(ValueError):
        mac_scenario(4)


def test_family_shapes():
    net = width_scaling_family(5)
    assert net.layer_sizes == (2, 5, 2)
    rep = anc_lower_bound(power_scaling_family(100.0), 2)
    assert rep.sandwich_ok
    assert anc_upper_bound(power_scaling_family(100.0)).argmin == 2
