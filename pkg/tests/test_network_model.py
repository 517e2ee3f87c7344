import math

import numpy as np
import pytest

import config
from common.errors import ConfigError, DomainError
from network_model import (Ar1State, apply_jitter, ar1_path, ar1_step, carry_over_or_reset, default_institutions,
                           hop_specs, jitter_factor)
from network_model.institutions import Institution, InstitutionSet
from network_model.routes import gateway_cities, geographic_component, npp_network_batch, npp_route_latency
from traffic_gen.scenarios import default_scenarios


def test_default_institutions_split_residual_share_across_regionals():
    insts = default_institutions()
    assert len(insts) == 13
    assert insts.shares.sum() == pytest.approx(1.0)
    regional = insts[insts.index_of('REG01')]
    assert regional.share == pytest.approx((1 - 0.927) / 9)
    assert not regional.multi_region
    assert insts[insts.index_of('CBA')].multi_region


def test_institution_set_rejects_bad_shares():
    with pytest.raises(ConfigError):
        InstitutionSet([Institution('A', 0.5, 'SYD'), Institution('B', 0.4, 'MEL')])


def test_sample_indices_follow_shares():
    insts = default_institutions()
    idx = insts.sample_indices(np.random.default_rng(1), 200_000)
    freq = np.bincount(idx, minlength=len(insts)) / idx.size
    assert freq[insts.index_of('CBA')] == pytest.approx(0.271, abs=0.005)


def test_ar1_path_matches_stepwise_recursion():
    state = Ar1State(x=0.4)
    z = np.random.default_rng(7).standard_normal(50)
    xs, end = ar1_path(state, z)
    x = 0.4
    expected = []
    for e in z:
        x = state.alpha * x + (1 - state.alpha) * state.sigma_eps * e
        expected.append(x)
    assert np.allclose(xs, expected)
    assert end.x == pytest.approx(expected[-1])


def test_ar1_path_empty_keeps_state():
    state = Ar1State(x=1.2)
    xs, end = ar1_path(state, [])
    assert xs.size == 0
    assert end == state


def test_ar1_rejects_unit_root():
    with pytest.raises(DomainError):
        Ar1State(alpha=1.0)


def test_state_carries_only_within_same_multi_day_family():
    table = default_scenarios()
    christmas, crash, normal = table.by_name('christmas'), table.by_name('crash'), table.by_name('normal')
    state = Ar1State(x=0.9)
    assert carry_over_or_reset(state, christmas, christmas).x == 0.9
    assert carry_over_or_reset(state, christmas, crash).x == 0.0
    assert carry_over_or_reset(state, normal, normal).x == 0.0


def test_apply_jitter_floors_negative_factor():
    state = Ar1State(x=-100.0)
    assert apply_jitter(5.0, state, floor_ms=0.01) == 0.01
    with pytest.raises(DomainError):
        apply_jitter(0.0, state)


def test_geographic_component_sums_city_legs():
    assert geographic_component('SYD', 'MEL') == pytest.approx(0.8 + 9.2)
    assert geographic_component('BNE', 'BNE') == pytest.approx(11.6)


def test_big4_destination_gateway_follows_origin_city():
    origin = np.array(['SYD', 'BNE'])
    dest = np.array(['MEL', 'MEL'])
    got = gateway_cities(origin, dest, np.array([True, False]))
    assert list(got) == ['SYD', 'MEL']


def test_npp_network_batch_median_and_additive_legs():
    hops = hop_specs()
    z = np.zeros((1, 3))
    intra, hub = hops['intrabank'].params, hops['hub'].params
    expected = 2 * math.exp(intra.mu_ln) + math.exp(hub.mu_ln)
    inclusive = npp_network_batch(z, 1.0, np.array(['SYD']), np.array(['MEL']), composition='hub_inclusive')
    additive = npp_network_batch(z, 1.0, np.array(['SYD']), np.array(['MEL']), composition='additive')
    assert inclusive[0] == pytest.approx(expected)
    assert additive[0] - inclusive[0] == pytest.approx(10.0)


def test_npp_network_batch_rejects_unknown_composition():
    with pytest.raises(ConfigError):
        npp_network_batch(np.zeros((1, 3)), 1.0, composition='teleport')


def test_npp_route_latency_mean_near_tier_means():
    insts = default_institutions()
    cba, anz = insts[insts.index_of('CBA')], insts[insts.index_of('ANZ')]
    rng = np.random.default_rng(3)
    values = [npp_route_latency(cba, anz, rng, Ar1State()) for _ in range(20_000)]
    # 1.2 + 9.8 + 1.2，加上 SYD 发起、ANZ 在 SYD 接入的两段 0.8
    assert np.mean(values) == pytest.approx(13.8, rel=0.02)


def _origin_city_means(rule, n=100_000):
    insts = default_institutions()
    rng = np.random.default_rng(11)
    dest_idx = insts.sample_indices(rng, n)
    z = rng.standard_normal((n, 3))
    xs, _ = ar1_path(Ar1State(), rng.standard_normal(n))
    factor = jitter_factor(xs)
    means = {}
    for city in ('SYD', 'MEL'):
        origin = np.full(n, city)
        dest = gateway_cities(origin, insts.cities[dest_idx], insts.multi_region[dest_idx], rule)
        means[city] = npp_network_batch(z, factor, origin, dest).mean()
    return means


def test_geographic_spread_between_melbourne_and_sydney_origins():
    means = _origin_city_means('origin')
    # 发起端 8.4 ms，Big 4 目的网关跟随发起城市再加 8.4 × 0.927
    assert means['MEL'] - means['SYD'] == pytest.approx(16.7, abs=1.5)


def test_registered_gateway_rule_keeps_only_origin_leg_spread():
    means = _origin_city_means('registered')
    assert means['MEL'] - means['SYD'] == pytest.approx(8.4, abs=0.01)


def test_gateway_rule_defaults_to_config(monkeypatch):
    origin, dest, multi = np.array(['SYD']), np.array(['MEL']), np.array([True])
    assert list(gateway_cities(origin, dest, multi)) == ['SYD']
    monkeypatch.setattr(config, 'MULTI_REGION_GATEWAY', 'registered')
    assert list(gateway_cities(origin, dest, multi)) == ['MEL']
    with pytest.raises(ConfigError):
        gateway_cities(origin, dest, multi, rule='nearest')


def test_ar1_stationary_variance():
    state = Ar1State()
    assert state.sigma_eps == 1.0
    xs, _ = ar1_path(state, np.random.default_rng(5).standard_normal(1_000_000))
    # (1-α)²σ² / (1-α²) = 0.49 / 0.91
    assert state.stationary_variance == pytest.approx(0.49 / 0.91)
    assert xs.var() == pytest.approx(state.stationary_variance, rel=0.02)


def test_ar1_without_persistence_is_scaled_innovation():
    state = Ar1State(x=5.0, alpha=0.0, sigma_eps=2.0)
    stepped = ar1_step(state, np.random.default_rng(9))
    assert stepped.x == pytest.approx(2.0 * np.random.default_rng(9).standard_normal())
    z = np.random.default_rng(4).standard_normal(100)
    xs, _ = ar1_path(state, z)
    assert np.allclose(xs, 2.0 * z)


def test_ar1_step_decays_towards_zero():
    state = Ar1State(x=1.0, sigma_eps=0.0)
    assert ar1_step(state, np.random.default_rng(0)).x == pytest.approx(0.3)
    assert ar1_step(Ar1State(x=0.0, sigma_eps=0.0), np.random.default_rng(0)).x == 0.0


def test_apply_jitter_scales_by_sigma_ar():
    assert apply_jitter(10.0, Ar1State(x=1.0)) == pytest.approx(11.5)
    assert apply_jitter(10.0, Ar1State(x=0.0)) == pytest.approx(10.0)
    assert np.allclose(jitter_factor(np.array([0.0, 2.0])), [1.0, 1.3])
