"""
交易流生成：每日按场景抽样路由、时刻、机构、金额，并在模拟前完成高额改道、
PayID 与 TLS 重连标记。列式批次 TrafficBatch 供引擎向量化使用，
generate_day 返回逐笔 Transaction 便于审计与测试。
"""
from dataclasses import dataclass

import numpy as np
import pandas as pd

import config
from common.errors import ConfigError
from network_model.institutions import Institution, InstitutionSet, default_institutions
from .intraday import default_profile, sample_hours

ROUTES = ('NPP', 'RTGS', 'SWIFT', 'INTRABANK')
ALLOCATIONS = ('npp_only', 'proportional')


@dataclass(frozen=True)
class Transaction:
    id: int
    route: str
    origin: Institution
    dest: Institution
    hour: float
    amount: float
    needs_payid: bool
    tls_reconnect: bool


@dataclass
class TrafficBatch:
    """一天的交易流（列式），按时刻排序，下标即 AR(1) 的时间索引"""
    route: np.ndarray
    origin_idx: np.ndarray
    dest_idx: np.ndarray
    hour: np.ndarray
    amount: np.ndarray
    needs_payid: np.ndarray
    tls_reconnect: np.ndarray
    institutions: InstitutionSet

    def __len__(self):
        return len(self.route)

    def mask(self, route):
        return self.route == route

    def transactions(self):
        insts = self.institutions
        return [
            Transaction(
                id=i,
                route=str(self.route[i]),
                origin=insts[int(self.origin_idx[i])],
                dest=insts[int(self.dest_idx[i])],
                hour=float(self.hour[i]),
                amount=float(self.amount[i]),
                needs_payid=bool(self.needs_payid[i]),
                tls_reconnect=bool(self.tls_reconnect[i]),
            )
            for i in range(len(self))
        ]

    def to_frame(self):
        """审计导出用"""
        insts = self.institutions
        return pd.DataFrame({
            'id': np.arange(len(self)),
            'route': self.route,
            'origin': [insts[int(i)].name for i in self.origin_idx],
            'dest': [insts[int(i)].name for i in self.dest_idx],
            'hour': np.round(self.hour, 4),
            'amount': np.round(self.amount, 2),
            'needs_payid': self.needs_payid,
            'tls_reconnect': self.tls_reconnect,
        })


def _route_choices(scenario, allocation, rng, n_sample):
    if allocation == 'npp_only':
        return np.full(n_sample, 'NPP', dtype=object)
    if allocation == 'proportional':
        volumes = scenario.route_volumes
        p = np.array([volumes[r] for r in ROUTES], dtype=float)
        return np.array(ROUTES, dtype=object)[rng.choice(len(ROUTES), size=n_sample, p=p / p.sum())]
    raise ConfigError(f"unknown sample allocation '{allocation}' (expected one of {', '.join(ALLOCATIONS)})")


def generate_day_batch(scenario, n_sample, rng, institutions=None, profile=None, allocation=None):
    """
    rng 的消费顺序固定：路由、时刻、发起机构、目的机构、金额、PayID、TLS 重连。
    同一 (seed, 配置) 因此得到逐字节相同的交易流。
    """
    if n_sample <= 0:
        raise ConfigError(f"n_sample must be positive, got {n_sample}")
    institutions = default_institutions() if institutions is None else institutions
    profile = default_profile() if profile is None else profile
    allocation = config.SAMPLE_ALLOCATION if allocation is None else allocation

    route = _route_choices(scenario, allocation, rng, n_sample)
    hour = sample_hours(profile, rng, n_sample)
    origin_idx = institutions.sample_indices(rng, n_sample)
    dest_idx = institutions.sample_indices(rng, n_sample)
    amount = np.exp(config.AMOUNT_LN_MU + config.AMOUNT_LN_SIGMA * rng.standard_normal(n_sample))
    payid_u = rng.random(n_sample)
    tls_u = rng.random(n_sample)

    # 高额 NPP 交易在模拟前改走 RTGS
    route = np.where((route == 'NPP') & (amount > config.HIGH_VALUE_THRESHOLD_AUD), 'RTGS', route)
    is_npp = route == 'NPP'

    order = np.argsort(hour, kind='stable')
    return TrafficBatch(
        route=route[order],
        origin_idx=origin_idx[order],
        dest_idx=dest_idx[order],
        hour=hour[order],
        amount=amount[order],
        needs_payid=(is_npp & (payid_u < config.PAYID_RATE))[order],
        tls_reconnect=(is_npp & (tls_u < config.TLS_RECONNECT_RATE))[order],
        institutions=institutions,
    )


def generate_day(scenario, n_sample, rng, **kwargs):
    return generate_day_batch(scenario, n_sample, rng, **kwargs).transactions()


def payid_latency(rng, mu=None, sigma=None):
    """PayID 查询时延 (ms)，对数正态 LN(2.0, 0.47)，均值约 8.25 ms"""
    mu = config.PAYID_LN_MU if mu is None else mu
    sigma = config.PAYID_LN_SIGMA if sigma is None else sigma
    return float(np.exp(mu + sigma * rng.standard_normal()))


def reconnect_table(profiles, baseline=None):
    """
    TLS 重连附加开销表 (ms)，键为画像名称。
    未公布的算法取相对基准算法的签名边际耗时。
    """
    baseline = config.BASELINE_ALGORITHM if baseline is None else baseline
    by_name = {p.name: p for p in profiles}
    base_sign = by_name[baseline].sign_mean_us if baseline in by_name else 0.0
    table = {}
    for p in profiles:
        if p.tls_reconnect_ms is not None:
            table[p.name] = float(p.tls_reconnect_ms)
        else:
            marginal = p.sign_mean_us + p.classical_sign_mean_us - base_sign
            table[p.name] = max(0.0, marginal) / 1000.0
    return table


def tls_reconnect_overhead(algo, table=None):
    if table is None:
        from latency_db.profiles import builtin_profiles
        table = reconnect_table(builtin_profiles())
    try:
        return table[algo.name]
    except KeyError:
        raise ConfigError(f"no TLS reconnect overhead configured for algorithm '{algo.name}'") from None
