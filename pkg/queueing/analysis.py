"""
基于 M/M/c 的派生分析：DoS 放大、日内逐小时饱和、TPS 扫描、降级模式对比。
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np
import pandas as pd

import config
from common.errors import DomainError
from traffic_gen.intraday import default_profile, institution_daily_volume, intraday_rate
from .erlang import QueueParams, mmc_assess, saturation_boundary

SWEEP_COLUMNS = ['algo', 'tps_or_hour', 'rho', 'erlang_c', 'wait_ms', 'saturated']


@dataclass(frozen=True)
class DosMetrics:
    surplus_ops_s: float
    queued_count: float
    last_wait_s: float
    mean_wait_s: float
    utilisation_ratio: Optional[float]


@dataclass(frozen=True)
class HourlyProfile:
    algo: str
    scenario: str
    c: int
    lambdas: tuple
    assessments: tuple

    @property
    def saturated_hours(self):
        return sum(1 for a in self.assessments if a.saturated)

    @property
    def peak_hour(self):
        return int(np.argmax([a.rho for a in self.assessments]))

    @property
    def peak_rho(self):
        return self.assessments[self.peak_hour].rho

    def to_frame(self):
        return pd.DataFrame({
            'algo': self.algo,
            'tps_or_hour': np.arange(24),
            'rho': [a.rho for a in self.assessments],
            'erlang_c': [a.erlang_c for a in self.assessments],
            'wait_ms': [a.mean_wait_ms for a in self.assessments],
            'saturated': [a.saturated for a in self.assessments],
        }, columns=SWEEP_COLUMNS)


@dataclass(frozen=True)
class DegradedComparison:
    algo: str
    p99_normal: float
    p99_degraded: float
    rho_normal: float
    rho_degraded: float
    meaningful: bool

    @property
    def delta(self):
        if not self.meaningful:
            return None
        return self.p99_degraded - self.p99_normal


def route_arrival_rate(route, scenario=None):
    """
    路由到达率 (TPS)：基准 λ 按场景日交易量相对正常日缩放。
    INTRABANK 不经过 HSM 排队，返回 0。
    """
    if route == 'INTRABANK':
        return 0.0
    if route not in config.ROUTE_LAMBDA_TPS:
        raise DomainError(f"no arrival rate configured for route '{route}'")
    base = config.ROUTE_LAMBDA_TPS[route]
    if scenario is None:
        return base
    return base * scenario.route_volumes[route] / config.REFERENCE_VOLUMES[route]


def dos_metrics(lam, mu, c, duration_s, baseline=None):
    """
    不稳定队列在 duration_s 内的线性积压。
    平均等待取最后一笔等待的一半（队列从空开始线性增长）。
    """
    params = QueueParams(lam, mu, c)
    if params.rho < 1:
        raise DomainError(f"queue is stable (rho={params.rho:.4f}); backlog does not grow")
    if not duration_s > 0:
        raise DomainError(f"duration must be positive, got {duration_s}")
    surplus = lam - saturation_boundary(mu, c)
    queued = surplus * duration_s
    last_wait = queued / params.capacity
    ratio = params.rho / baseline.rho if baseline is not None else None
    return DosMetrics(surplus_ops_s=surplus, queued_count=queued, last_wait_s=last_wait,
                      mean_wait_s=last_wait / 2.0, utilisation_ratio=ratio)


def hourly_profile(algo, scenario, c=None, profile=None):
    """24 个整点的 λ(h) 分别做稳态评估"""
    c = config.C_SERVERS if c is None else c
    profile = default_profile() if profile is None else profile
    volume = institution_daily_volume(scenario)
    lambdas = tuple(intraday_rate(h, profile, volume) for h in range(24))
    assessments = tuple(mmc_assess(QueueParams(lam, algo.mu_ops, c)) for lam in lambdas)
    return HourlyProfile(algo=algo.name, scenario=scenario.name, c=c, lambdas=lambdas, assessments=assessments)


def tps_sweep(profiles, c=None, tps_max=None, step=None):
    """每个画像在 (0, tps_max] 上按 step 扫描 ρ 与 W_q"""
    c = config.C_SERVERS if c is None else c
    tps_max = config.SWEEP_TPS_MAX if tps_max is None else tps_max
    step = config.SWEEP_TPS_STEP if step is None else step
    n = int(round(tps_max / step))
    grid = np.round(np.arange(1, n + 1) * step, 10)
    rows = []
    for algo in profiles:
        for lam in grid:
            a = mmc_assess(QueueParams(float(lam), algo.mu_ops, c))
            rows.append((algo.name, float(lam), a.rho, a.erlang_c, a.mean_wait_ms, a.saturated))
    return pd.DataFrame(rows, columns=SWEEP_COLUMNS)


def first_saturated_tps(sweep, algo_name):
    """扫描中首个 ρ >= 1 的到达率；从未饱和返回 None"""
    hit = sweep[(sweep['algo'] == algo_name) & sweep['saturated']]
    if hit.empty:
        return None
    return float(hit['tps_or_hour'].iloc[0])


def degraded_compare(algo, base_p99_ms, lam=None, c_normal=2, c_degraded=1):
    """
    单 HSM 故障（c_degraded）相对正常（c_normal）的路由 p99。
    base_p99_ms 为不含排队等待的路由 p99；任一侧饱和时对比无意义。
    """
    lam = config.ROUTE_LAMBDA_TPS['NPP'] if lam is None else lam
    normal = mmc_assess(QueueParams(lam, algo.mu_ops, c_normal))
    degraded = mmc_assess(QueueParams(lam, algo.mu_ops, c_degraded))
    return DegradedComparison(
        algo=algo.name,
        p99_normal=base_p99_ms + normal.mean_wait_ms,
        p99_degraded=base_p99_ms + degraded.mean_wait_ms,
        rho_normal=normal.rho,
        rho_degraded=degraded.rho,
        meaningful=not (normal.saturated or degraded.saturated),
    )
