import io
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ancrate.bounds import (SWEEP_HEADER, anc_lower_bound, anc_upper_bound, best_lower_bound,
                            general_cut_upper_bound, high_snr_gap_sweep, mimo_cut_capacity,
                            water_filling, write_sweep_csv)
from ancrate.core import rate_from_snr
from ancrate.fixtures import diamond, power_scaling_family, swapped_diamond, SWAPPED_CROSSOVER
from ancrate.generators import random_dag, random_layered
from ancrate.network import NetworkError, two_hop
from ancrate.oracle import grid_search_best_gains

seeds = st.integers(0, 2 ** 32 - 1)


def test_unit_two_hop_bound():
    rep = anc_upper_bound(two_hop(2, [1, 1], [1, 1], 1.0, 1.0))
    assert rep.layer_bounds[0] == pytest.approx(0.5 * math.log2(3), abs=1e-12)
    assert rep.layer_bounds[1] == pytest.approx(0.5 * math.log2(5), abs=1e-12)
    assert rep.argmin == 1


@pytest.mark.parametrize("a", [0.5, 1.0, 2.0])
def test_swapped_layer_bounds(a):
    rep = anc_upper_bound(swapped_diamond(a))
    assert rep.layer_bounds[0] == pytest.approx(rate_from_snr(a ** 4 + a ** 2), rel=1e-14)
    assert rep.layer_bounds[1] == pytest.approx(rate_from_snr(4.0), rel=1e-14)


def test_swapped_crossover():
    a = SWAPPED_CROSSOVER
    assert a ** 4 + a ** 2 == pytest.approx(4.0, rel=1e-14)
    assert a == pytest.approx(1.2496, abs=5e-5)
    assert anc_upper_bound(swapped_diamond(a - 1e-3)).argmin == 1
    assert anc_upper_bound(swapped_diamond(a + 1e-3)).argmin == 2


def test_upper_bound_needs_layered():
    net = random_dag(np.random.default_rng(3))
    with pytest.raises(NetworkError):
        anc_upper_bound(net)


@settings(max_examples=8)
@given(seeds)
def test_numeric_cut_bound_reproduces_layer_bounds(seed):
    net = random_layered(np.random.default_rng(seed), max_layers=3, max_width=2)
    rep = general_cut_upper_bound(net, starts=3)
    up = anc_upper_bound(net)
    assert rep.cut_rates == pytest.approx(up.layer_bounds, rel=1e-6)


def test_numeric_cut_bound_needs_cuts_for_dag():
    net = random_dag(np.random.default_rng(5), max_nodes=6)
    with pytest.raises(NetworkError):
        general_cut_upper_bound(net)
    rep = general_cut_upper_bound(net, cuts=[["D"]], starts=2)
    assert rep.numeric and rep.r_up >= 0


def test_numeric_cut_bound_domain():
    with pytest.raises(ValueError):
        general_cut_upper_bound(diamond(), domain="box")
    rep = general_cut_upper_bound(diamond(), domain="lemma1", starts=2)
    assert rep.r_up <= anc_upper_bound(diamond()).r_up + 1e-9


@given(st.lists(st.floats(0.01, 10.0), min_size=1, max_size=6), st.floats(0.1, 50.0))
def test_water_filling(g, p):
    alloc = water_filling(g, p)
    assert alloc.sum() == pytest.approx(p, abs=1e-9)
    assert np.all(alloc >= 0)
    g = np.asarray(g)
    level = alloc + 1 / g
    on = alloc > 1e-12
    assert np.allclose(level[on], level[on][0], atol=1e-9)
    assert np.all(1 / g[~on] >= level[on][0] - 1e-9)


def test_mimo_first_cut_equals_layer_bound():
    net = random_layered(np.random.default_rng(11))
    assert mimo_cut_capacity(net, 1) == pytest.approx(anc_upper_bound(net).layer_bounds[0], rel=1e-12)


@given(seeds)
def test_mimo_cut_dominates_layer_bound(seed):
    net = random_layered(np.random.default_rng(seed))
    up = anc_upper_bound(net)
    for l in range(1, net.L + 1):
        assert mimo_cut_capacity(net, l) >= up.layer_bounds[l - 1] - 1e-9


@given(seeds)
def test_lower_bound_below_upper(seed):
    net = random_layered(np.random.default_rng(seed))
    best = best_lower_bound(net)
    assert best.sandwich_ok
    assert best.r_low <= anc_upper_bound(net).r_up + 1e-12
    for l0 in range(1, net.L + 1):
        assert anc_lower_bound(net, l0).r_low <= best.r_low


@settings(max_examples=10)
@given(seeds)
def test_grid_optimum_below_upper_bound(seed):
    net = random_layered(np.random.default_rng(seed), max_layers=3, max_width=2)
    res = grid_search_best_gains(net, grid_points_per_dim=9, refine_rounds=2)
    assert res.rate <= anc_upper_bound(net).r_up + 1e-12


def test_sweep_and_csv():
    rows = high_snr_gap_sweep(power_scaling_family, [1.0, 10.0, 100.0], l0=2)
    assert [r.param for r in rows] == [1.0, 10.0, 100.0]
    for r in rows:
        assert r.r_low <= r.rate <= r.r_up + 1e-12
        assert r.delta == pytest.approx(r.r_up - r.r_low)
    text = write_sweep_csv(rows)
    assert text.splitlines()[0] == ",".join(SWEEP_HEADER)
    assert len(text.splitlines()) == 4
    buf = io.StringIO()
    write_sweep_csv(rows, buf)
    assert buf.getvalue() == text
    with pytest.raises(ValueError):
        high_snr_gap_sweep(power_scaling_family, [])
