"""
RITS / SWIFT 路由 p99 分解：签名 p99 + 固定开销（网络 p99 + 结算处理）+ 排队等待。
BECS 批量签名按批摊销。
"""
from dataclasses import dataclass

import pandas as pd

import config
from common.errors import DomainError
from queueing import QueueParams, mmc_assess

from .cdi import cdi

# 路由名 -> 到达率表中的键
ROUTE_LAMBDA_KEY = {'RITS': 'RTGS', 'SWIFT': 'SWIFT'}


@dataclass(frozen=True)
class RouteSpec:
    name: str
    network_p99_ms: float
    processing_ms: float
    sla_ms: float
    lambda_tps: float

    @property
    def fixed_overhead_ms(self):
        return self.network_p99_ms + self.processing_ms


@dataclass(frozen=True)
class RouteResult:
    route: str
    algo: str
    sign_p99_ms: float
    wait_ms: float
    route_p99_ms: float
    delta_vs_baseline_ms: float
    cdi_route: float
    sla_ms: float
    sla_pass: bool


def route_specs(overheads=None, sla_ms=None, lambdas=None):
    overheads = config.ROUTE_OVERHEADS_MS if overheads is None else overheads
    sla_ms = config.SLA_MS if sla_ms is None else sla_ms
    lambdas = config.ROUTE_LAMBDA_TPS if lambdas is None else lambdas
    return [RouteSpec(name=name, network_p99_ms=o['network_p99_ms'], processing_ms=o['processing_ms'],
                      sla_ms=sla_ms[name], lambda_tps=lambdas[ROUTE_LAMBDA_KEY[name]])
            for name, o in overheads.items()]


def route_sign_p99(profile, npp_delta_p99_ms=None):
    """
    路由上单次签名的 p99：SPHINCS+ 直接取测得的 297 ms，
    其余算法为 ECDSA 的 0.15 ms 加上该算法的 NPP Δp99（未给出时取画像中的公布值）。
    """
    if profile.is_saturating:
        return config.ROUTE_SPHINCS_SIGN_P99_MS
    delta = profile.delta_p99_ref_ms if npp_delta_p99_ms is None else npp_delta_p99_ms
    return config.ROUTE_ECDSA_SIGN_P99_MS + max(0.0, delta)


def route_p99(route, profile, sign_p99_ms, c=None, baseline_route_p99_ms=None):
    c = config.C_SERVERS if c is None else c
    if sign_p99_ms < 0:
        raise DomainError(f"sign p99 must be >= 0, got {sign_p99_ms}")
    queue = mmc_assess(QueueParams(lam=route.lambda_tps, mu=profile.mu_ops, c=c))
    wait_ms = queue.mean_wait_ms
    total = sign_p99_ms + route.fixed_overhead_ms + wait_ms
    baseline = (config.ROUTE_ECDSA_SIGN_P99_MS + route.fixed_overhead_ms
                if baseline_route_p99_ms is None else baseline_route_p99_ms)
    delta = max(0.0, total - baseline)
    return RouteResult(route=route.name, algo=profile.name, sign_p99_ms=sign_p99_ms, wait_ms=wait_ms,
                       route_p99_ms=total, delta_vs_baseline_ms=delta, cdi_route=cdi(delta, total).cdi,
                       sla_ms=route.sla_ms, sla_pass=total <= route.sla_ms)


def route_table(profiles, npp_deltas=None, c=None, routes=None, baseline=None):
    """
    所有 (路由, 算法) 组合的 p99 表。npp_deltas 为 {算法: 模拟测得的 NPP Δp99}，
    缺省使用画像中的公布值。
    """
    npp_deltas = npp_deltas or {}
    routes = route_specs() if routes is None else routes
    baseline = config.BASELINE_ALGORITHM if baseline is None else baseline
    by_name = {p.name: p for p in profiles}
    if baseline not in by_name:
        raise DomainError(f"baseline algorithm '{baseline}' is not among the profiles")

    rows = []
    for route in routes:
        base_profile = by_name[baseline]
        base = route_p99(route, base_profile, route_sign_p99(base_profile, npp_deltas.get(baseline)), c=c)
        for profile in profiles:
            sign = route_sign_p99(profile, npp_deltas.get(profile.name))
            rows.append(route_p99(route, profile, sign, c=c, baseline_route_p99_ms=base.route_p99_ms))
    return pd.DataFrame([r.__dict__ for r in rows])


def becs_amortised(sign_ms, batch_size=None, hsm_ms=0.0):
    """批量签名时每笔分摊的签名耗时 (ms)"""
    batch_size = config.BECS_BATCH_SIZE if batch_size is None else batch_size
    if batch_size < 1:
        raise DomainError(f"BECS batch size must be >= 1, got {batch_size}")
    return (sign_ms + hsm_ms) / batch_size
