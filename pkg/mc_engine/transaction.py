"""
单笔与批量交易的端到端时延组装 (ms)：
网络路由 + PayID + 每个签名 hop 的签名抽样与验签 + HSM 部署开销 + TLS 重连 + M/M/c 平均排队等待。
批量版本是主路径，单笔版本复用同一套逐列计算。
"""
from dataclasses import dataclass, field

import numpy as np

import config
from network_model.ar1 import Ar1State, jitter_factor
from network_model.institutions import hop_specs
from network_model.routes import NPP_DRAW_COLUMNS, gateway_cities, npp_network_batch
from queueing.analysis import route_arrival_rate
from queueing.erlang import QueueParams, mmc_assess
from traffic_gen.generator import reconnect_table, tls_reconnect_overhead

MAX_SIGNING_HOPS = max(config.SIGNING_HOPS.values())
NON_NPP_HOPS = {'RTGS': ('rits', 'RITS'), 'SWIFT': ('swift', 'SWIFT')}


@dataclass(frozen=True)
class LatencyEnv:
    """组装时延所需、与算法无关的参数"""
    composition: str
    hops: dict
    city_table: dict
    hsm_ms: float
    c_servers: int
    reconnect: dict
    sigma_ar: float
    floor_ms: float
    npp_volume_scale: float = 1.0
    becs_batch_size: int = config.BECS_BATCH_SIZE
    gateway: str = field(default_factory=lambda: config.MULTI_REGION_GATEWAY)


@dataclass
class TransactionDraws:
    """
    一批交易的公共随机数。
    x: AR(1) 状态；net_z: (n, 3) 网络正态；payid_z: (n,)；sign_z: (n, hops, 2)，最后一维为 PQC / 经典签名。
    """
    route: np.ndarray
    origin_cities: np.ndarray
    dest_cities: np.ndarray
    needs_payid: np.ndarray
    tls_reconnect: np.ndarray
    x: np.ndarray
    net_z: np.ndarray
    payid_z: np.ndarray
    sign_z: np.ndarray

    def __len__(self):
        return len(self.route)


def queue_wait_ms(route, algo, scenario, env):
    if route == 'INTRABANK':
        return 0.0
    lam = route_arrival_rate(route, scenario)
    if route == 'NPP':
        lam *= env.npp_volume_scale
    return mmc_assess(QueueParams(lam, algo.mu_ops, env.c_servers)).mean_wait_ms


def _sign_ms(algo, z):
    """z: (..., 2) 标准正态；返回签名时延 (ms)，hybrid 叠加经典签名"""
    p = algo.sign_params
    total = np.exp(p.mu_ln + p.sigma_ln * z[..., 0])
    if algo.classical is not None:
        cp = algo.classical.sign_params
        total = total + np.exp(cp.mu_ln + cp.sigma_ln * z[..., 1])
    return total / 1000.0


def _verify_ms(algo):
    total = algo.verify_mean_us
    if algo.classical is not None:
        total += algo.classical.verify_mean_us
    return total / 1000.0


def _tier_draw(hop, z, factor, floor_ms):
    p = hop.params
    return np.maximum(np.exp(p.mu_ln + p.sigma_ln * z) * factor, floor_ms)


def _network_ms(draws, mask, route, env, factor):
    if route == 'NPP':
        return npp_network_batch(draws.net_z[mask], factor, draws.origin_cities[mask], draws.dest_cities[mask],
                                 composition=env.composition, hops=env.hops, city_table=env.city_table,
                                 floor_ms=env.floor_ms)
    if route == 'INTRABANK':
        return _tier_draw(env.hops['intrabank'], draws.net_z[mask, 0], factor, env.floor_ms)
    tier, overhead_key = NON_NPP_HOPS[route]
    processing = config.ROUTE_OVERHEADS_MS[overhead_key]['processing_ms']
    return _tier_draw(env.hops[tier], draws.net_z[mask, 0], factor, env.floor_ms) + processing


def latency_batch(draws, algo, scenario, env):
    """批量端到端时延 (ms)，与 draws 同序"""
    n = len(draws)
    out = np.zeros(n)
    factor_all = jitter_factor(draws.x, env.sigma_ar)
    verify_ms = _verify_ms(algo)
    for route in np.unique(draws.route):
        mask = draws.route == route
        factor = factor_all[mask]
        hops = config.SIGNING_HOPS[route]
        total = _network_ms(draws, mask, route, env, factor)

        sign = _sign_ms(algo, draws.sign_z[mask, :hops, :]).sum(axis=1)
        if route == 'INTRABANK':
            # BECS 批量签名，签名与 HSM 开销摊到整批
            total = total + (sign + hops * env.hsm_ms) / env.becs_batch_size
        else:
            total = total + sign + hops * (verify_ms + env.hsm_ms)

        if route == 'NPP':
            payid = np.exp(config.PAYID_LN_MU + config.PAYID_LN_SIGMA * draws.payid_z[mask])
            total = total + np.where(draws.needs_payid[mask], payid, 0.0)
            total = total + np.where(draws.tls_reconnect[mask], tls_reconnect_overhead(algo, env.reconnect), 0.0)

        out[mask] = total + queue_wait_ms(route, algo, scenario, env)
    return out


def default_env(hsm_ms=None, c_servers=None, composition=None, reconnect=None, ar1=None, npp_volume_scale=1.0):
    from latency_db.profiles import builtin_profiles

    ar1 = Ar1State() if ar1 is None else ar1
    return LatencyEnv(
        composition=config.ROUTE_COMPOSITION if composition is None else composition,
        hops=hop_specs(),
        city_table=dict(config.CITY_HUB_MS),
        hsm_ms=config.HSM_OVERHEAD_PER_HOP_MS[config.HSM_TIER] if hsm_ms is None else hsm_ms,
        c_servers=config.C_SERVERS if c_servers is None else c_servers,
        reconnect=reconnect_table(builtin_profiles()) if reconnect is None else reconnect,
        sigma_ar=ar1.sigma_ar,
        floor_ms=config.JITTER_FLOOR_MS,
        npp_volume_scale=npp_volume_scale,
    )


def simulate_transaction(tx, algo, env, rng, ar1, scenario=None):
    """
    单笔交易的端到端时延 (ms)。ar1 为该笔交易时刻的 AR(1) 状态，由调用方推进。
    """
    origin_cities = np.array([tx.origin.city])
    dest_cities = gateway_cities(origin_cities, np.array([tx.dest.city]), np.array([tx.dest.multi_region]),
                                 env.gateway)
    draws = TransactionDraws(
        route=np.array([tx.route]),
        origin_cities=origin_cities,
        dest_cities=dest_cities,
        needs_payid=np.array([tx.needs_payid]),
        tls_reconnect=np.array([tx.tls_reconnect]),
        x=np.array([ar1.x]),
        net_z=rng.standard_normal((1, len(NPP_DRAW_COLUMNS))),
        payid_z=rng.standard_normal(1),
        sign_z=rng.standard_normal((1, MAX_SIGNING_HOPS, 2)),
    )
    return float(latency_batch(draws, algo, scenario, env)[0])

