"""
M/M/c 解析模型：Erlang-C 延迟概率、平均排队等待、饱和边界与最小服务器数。
Erlang-C 由 Erlang-B 递推换算，避免大 c 时阶乘溢出。
"""
import math
from dataclasses import dataclass

import config
from common.errors import DomainError, StabilityError

US_PER_S = 1e6
SERVER_CRITERIA = ('stability', 'wait_below', 'mean_wait_below')


@dataclass(frozen=True)
class QueueParams:
    lam: float
    mu: float
    c: int

    def __post_init__(self):
        if self.lam < 0:
            raise DomainError(f"arrival rate must be >= 0, got {self.lam}")
        if not self.mu > 0:
            raise DomainError(f"service rate must be > 0, got {self.mu}")
        if int(self.c) != self.c or self.c < 1:
            raise DomainError(f"server count must be an integer >= 1, got {self.c}")

    @property
    def offered_erlangs(self):
        return self.lam / self.mu

    @property
    def rho(self):
        return self.lam / (self.c * self.mu)

    @property
    def capacity(self):
        return self.c * self.mu


@dataclass(frozen=True)
class QueueAssessment:
    rho: float
    offered_erlangs: float
    erlang_c: float
    mean_wait_us: float
    saturated: bool

    @property
    def mean_wait_ms(self):
        return self.mean_wait_us / 1000.0


def erlang_b(c, a):
    b = 1.0
    for k in range(1, int(c) + 1):
        b = a * b / (k + a * b)
    return b


def erlang_c(c, a):
    """
    Erlang-C 延迟概率 C(c, a)，仅在稳定区间 0 <= a < c 有定义。
    """
    if int(c) != c or c < 1:
        raise DomainError(f"server count must be an integer >= 1, got {c}")
    if a < 0:
        raise DomainError(f"offered traffic must be >= 0, got {a}")
    if a >= c:
        raise StabilityError(f"unstable queue: offered traffic {a:.4f} >= servers {c}")
    if a == 0:
        return 0.0
    b = erlang_b(c, a)
    return c * b / (c - a * (1.0 - b))


def mmc_assess(params, sentinel_us=None):
    sentinel_us = config.QUEUE_SENTINEL_US if sentinel_us is None else sentinel_us
    rho = params.rho
    a = params.offered_erlangs
    if rho >= 1:
        return QueueAssessment(rho=rho, offered_erlangs=a, erlang_c=1.0, mean_wait_us=float(sentinel_us),
                               saturated=True)
    prob = erlang_c(params.c, a)
    wait_s = prob / (params.capacity - params.lam)
    return QueueAssessment(rho=rho, offered_erlangs=a, erlang_c=prob, mean_wait_us=wait_s * US_PER_S,
                           saturated=False)


def saturation_boundary(mu, c):
    """λ_sat = c·μ (TPS)"""
    if not mu > 0:
        raise DomainError(f"service rate must be > 0, got {mu}")
    return c * mu


def psa_margin(mu, c, cap_tps=1.0):
    """饱和边界相对单机构到达率上限的倍数"""
    if not cap_tps > 0:
        raise DomainError(f"arrival cap must be > 0, got {cap_tps}")
    return saturation_boundary(mu, c) / cap_tps


def wait_quantile(params, p, sentinel_us=None):
    """
    排队等待的 p 分位数 (µs)。M/M/c 的条件等待服从速率 cμ-λ 的指数分布，
    故 P(W > t) = C·exp(-(cμ-λ)t)；p <= 1-C 时分位数为 0。
    """
    sentinel_us = config.QUEUE_SENTINEL_US if sentinel_us is None else sentinel_us
    if not 0 < p < 1:
        raise DomainError(f"quantile must be in (0, 1), got {p}")
    if params.rho >= 1:
        return float(sentinel_us)
    prob = erlang_c(params.c, params.offered_erlangs)
    if p <= 1.0 - prob:
        return 0.0
    return math.log(prob / (1.0 - p)) / (params.capacity - params.lam) * US_PER_S


def min_servers(lam, mu, criterion='stability', wait_below_ms=None, quantile=None, max_servers=None):
    """
    满足条件的最小服务器数：
    - stability: ρ < 1
    - wait_below: 排队等待的 quantile 分位数 <= wait_below_ms（缺省 MIN_SERVERS_WAIT_QUANTILE = p95）
    - mean_wait_below: 平均排队等待 <= wait_below_ms
    """
    max_servers = config.MAX_SERVERS if max_servers is None else max_servers
    quantile = config.MIN_SERVERS_WAIT_QUANTILE if quantile is None else quantile
    if not lam > 0 or not mu > 0:
        raise DomainError(f"lambda and mu must be positive (got {lam}, {mu})")
    if criterion not in SERVER_CRITERIA:
        raise DomainError(f"unknown criterion '{criterion}'")
    if criterion != 'stability' and (wait_below_ms is None or wait_below_ms < 0):
        raise DomainError(f"{criterion} criterion needs a non-negative bound in ms")

    # 稳定性要求 c > λ/μ
    c = max(1, math.floor(lam / mu) + 1)
    while c <= max_servers:
        params = QueueParams(lam, mu, c)
        assessment = mmc_assess(params)
        if not assessment.saturated:
            if criterion == 'stability':
                return c
            if criterion == 'mean_wait_below':
                wait_ms = assessment.mean_wait_ms
            else:
                wait_ms = wait_quantile(params, quantile) / 1000.0
            if wait_ms <= wait_below_ms:
                return c
        c += 1
    raise DomainError(f"no server count up to {max_servers} satisfies the {criterion} criterion")
