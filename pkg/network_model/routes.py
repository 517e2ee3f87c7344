import numpy as np

import config
from common.errors import ConfigError
from .ar1 import jitter_factor
from .institutions import InstitutionSet, city_latencies, hop_specs

COMPOSITIONS = ('hub_inclusive', 'additive')
GATEWAY_RULES = ('origin', 'registered')

# NPP 路由每笔交易使用的标准正态列：发起行内、hub、目的行内
NPP_DRAW_COLUMNS = ('intrabank_origin', 'hub', 'intrabank_dest')


def geographic_component(origin_city, dest_city, city_table=None):
    """城市到 hub 的确定性单程之和（发起城市 + 目的网关城市）"""
    legs = city_latencies(city_table)
    return legs[origin_city].one_way_ms + legs[dest_city].one_way_ms


def gateway_cities(origin_cities, dest_cities, dest_multi_region, rule=None):
    """
    目的网关城市。origin 规则下多区域机构（Big 4）在发起城市接入，区域机构只有注册城市；
    registered 规则一律取注册城市。
    """
    rule = config.MULTI_REGION_GATEWAY if rule is None else rule
    if rule not in GATEWAY_RULES:
        raise ConfigError(f"unknown gateway rule '{rule}'")
    if rule == 'registered':
        return np.asarray(dest_cities)
    return np.where(dest_multi_region, origin_cities, dest_cities)


def _jittered(base, factor, floor_ms):
    return np.maximum(base * factor, floor_ms)


def npp_network_batch(z, factor, origin_cities=None, dest_cities=None, composition=None, hops=None,
                      city_table=None, floor_ms=None):
    """
    向量化 NPP 网络时延 (ms)。
    z: (n, 3) 标准正态，列序见 NPP_DRAW_COLUMNS；factor: 每笔交易的抖动系数 1 + σ_AR·x。
    additive 模式需要 origin/dest 城市数组（dest 已按网关规则换算）。
    """
    composition = config.ROUTE_COMPOSITION if composition is None else composition
    floor_ms = config.JITTER_FLOOR_MS if floor_ms is None else floor_ms
    if composition not in COMPOSITIONS:
        raise ConfigError(f"unknown route composition '{composition}'")
    hops = hop_specs() if hops is None else hops
    z = np.atleast_2d(z)
    intra, hub = hops['intrabank'].params, hops['hub'].params

    total = _jittered(np.exp(intra.mu_ln + intra.sigma_ln * z[:, 0]), factor, floor_ms)
    total += _jittered(np.exp(hub.mu_ln + hub.sigma_ln * z[:, 1]), factor, floor_ms)
    total += _jittered(np.exp(intra.mu_ln + intra.sigma_ln * z[:, 2]), factor, floor_ms)
    if composition == 'additive':
        legs = city_latencies(city_table)
        lookup = np.vectorize(lambda c: legs[c].one_way_ms, otypes=[float])
        total += lookup(origin_cities) + lookup(dest_cities)
    return total


def npp_route_latency(origin, dest, rng, ar1, composition=None, hops=None, city_table=None, gateway=None):
    """
    单笔 NPP 路由时延：两端行内 hop + hub hop（+ additive 模式下的城市单程），
    同一笔交易的所有 hop 共用同一个 AR(1) 状态。
    """
    z = rng.standard_normal((1, len(NPP_DRAW_COLUMNS)))
    origin_cities = np.array([origin.city])
    dest_cities = gateway_cities(origin_cities, np.array([dest.city]), np.array([dest.multi_region]), gateway)
    value = npp_network_batch(z, jitter_factor(ar1.x, ar1.sigma_ar), origin_cities, dest_cities,
                              composition=composition, hops=hops, city_table=city_table)
    return float(value[0])


def route_city_arrays(institutions: InstitutionSet, origin_idx, dest_idx, gateway=None):
    origin_cities = institutions.cities[origin_idx]
    dest_cities = gateway_cities(origin_cities, institutions.cities[dest_idx], institutions.multi_region[dest_idx],
                                 gateway)
    return origin_cities, dest_cities
