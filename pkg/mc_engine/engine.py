"""
Monte Carlo 语料引擎。

一次运行 = n_days 个模拟日 × 每日 n_sample 笔交易 × 全部算法画像。
每日的场景、交易流、AR(1) 新息、网络与签名正态都取自与算法无关的子流，
所有算法在同一组公共随机数上求值，算法间的差值因此只来自签名画像本身。

连续的同族多日压力日（christmas / crash）构成一条链，AR(1) 状态沿链传递；
链是并行的最小单位，结果按日序号合并，与 worker 数无关。
"""
import math
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np
import pandas as pd
from scipy import stats

import config
from common import log
from common.errors import ConfigError, DomainError
from common.parallel import resolve_worker_count, run_tasks
from latency_db.profiles import builtin_profiles
from network_model.ar1 import Ar1State, ar1_path, carry_over_or_reset
from network_model.institutions import default_institutions, hop_specs
from network_model.routes import GATEWAY_RULES, NPP_DRAW_COLUMNS, route_city_arrays
from traffic_gen.generator import generate_day_batch, reconnect_table
from traffic_gen.intraday import default_profile
from traffic_gen.scenarios import default_scenarios
from .seeding import Purpose, day_rng
from .transaction import MAX_SIGNING_HOPS, LatencyEnv, TransactionDraws, latency_batch

# 统计口径路由：每日百分位与合规率只在 NPP 交易上计算
STAT_ROUTE = 'NPP'
ROUTE_SLA_KEY = {'NPP': 'NPP', 'INTRABANK': 'NPP', 'RTGS': 'RITS', 'SWIFT': 'SWIFT'}
REGION_COLUMN = 'origin_city'


def percentile(samples, q):
    """线性插值百分位，q 为 [0, 1] 内的分数"""
    arr = np.asarray(samples, dtype=float)
    if arr.size == 0:
        raise DomainError("percentile of an empty sample")
    if not 0 <= q <= 1:
        raise DomainError(f"quantile must be in [0, 1], got {q}")
    return float(np.percentile(arr, q * 100.0, method='linear'))


def ci_mean_t(values, confidence=0.95):
    """均值的 t 分布置信区间：mean ± t(α/2, n-1)·s/√n"""
    arr = np.asarray(values, dtype=float)
    n = arr.size
    if n < 2:
        raise DomainError(f"t interval needs at least 2 values, got {n}")
    mean = float(arr.mean())
    half = float(stats.t.ppf(0.5 + confidence / 2.0, n - 1)) * float(arr.std(ddof=1)) / math.sqrt(n)
    return mean - half, mean + half


@dataclass
class RunConfig:
    master_seed: int = field(default_factory=lambda: config.MASTER_SEED)
    n_days: int = field(default_factory=lambda: config.N_DAYS)
    n_sample: int = field(default_factory=lambda: config.N_SAMPLE)
    algorithms: tuple = field(default_factory=lambda: tuple(builtin_profiles()))
    sla_ms: dict = field(default_factory=lambda: dict(config.SLA_MS))
    hsm_overhead_per_hop_ms: float = field(
        default_factory=lambda: config.HSM_OVERHEAD_PER_HOP_MS[config.HSM_TIER])
    c_servers: int = field(default_factory=lambda: config.C_SERVERS)
    scenario_override: Optional[str] = field(default_factory=lambda: config.SCENARIO_OVERRIDE)
    composition: str = field(default_factory=lambda: config.ROUTE_COMPOSITION)
    gateway: str = field(default_factory=lambda: config.MULTI_REGION_GATEWAY)
    allocation: str = field(default_factory=lambda: config.SAMPLE_ALLOCATION)
    n_jobs: int = field(default_factory=lambda: config.N_JOBS)
    analysis_day: int = field(default_factory=lambda: config.ANALYSIS_SAMPLE_DAY)
    npp_volume_scale: float = 1.0
    institutions: object = field(default_factory=default_institutions)
    scenarios: object = field(default_factory=default_scenarios)
    intraday: object = field(default_factory=default_profile)
    hops: dict = field(default_factory=hop_specs)
    city_table: dict = field(default_factory=lambda: dict(config.CITY_HUB_MS))
    ar1: Ar1State = field(default_factory=lambda: Ar1State(
        alpha=config.AR1_ALPHA, sigma_ar=config.AR1_SIGMA_AR, sigma_eps=config.AR1_SIGMA_EPS))
    reconnect: Optional[dict] = None

    def __post_init__(self):
        problems = []
        if self.n_days < 1:
            problems.append(f"n_days must be >= 1, got {self.n_days}")
        if self.n_sample < 1:
            problems.append(f"n_sample must be >= 1, got {self.n_sample}")
        if self.c_servers < 1:
            problems.append(f"c_servers must be >= 1, got {self.c_servers}")
        if self.hsm_overhead_per_hop_ms < 0:
            problems.append("hsm overhead must be >= 0")
        for route, sla in self.sla_ms.items():
            if not sla > 0:
                problems.append(f"SLA for {route} must be positive, got {sla}")
        if not self.algorithms:
            problems.append("no algorithm profiles selected")
        if self.scenario_override is not None:
            try:
                self.scenarios.by_name(self.scenario_override)
            except ConfigError as e:
                problems.extend(e.problems)
        if self.gateway not in GATEWAY_RULES:
            problems.append(f"gateway rule must be one of {', '.join(GATEWAY_RULES)}, got '{self.gateway}'")
        if not 0 <= self.analysis_day:
            problems.append(f"analysis_day must be >= 0, got {self.analysis_day}")
        if problems:
            raise ConfigError(problems)
        if self.reconnect is None:
            self.reconnect = reconnect_table(self.algorithms)

    @property
    def env(self):
        return LatencyEnv(
            composition=self.composition,
            hops=self.hops,
            city_table=self.city_table,
            hsm_ms=self.hsm_overhead_per_hop_ms,
            c_servers=self.c_servers,
            reconnect=self.reconnect,
            sigma_ar=self.ar1.sigma_ar,
            floor_ms=config.JITTER_FLOOR_MS,
            npp_volume_scale=self.npp_volume_scale,
            gateway=self.gateway,
        )

    def algorithm(self, name):
        for algo in self.algorithms:
            if algo.name == name:
                return algo
        raise ConfigError(f"unknown algorithm '{name}'")


@dataclass(frozen=True)
class DayResult:
    day_index: int
    scenario: str
    p50_ms: float
    p95_ms: float
    p99_ms: float
    sla_compliance: float
    n: int
    max_ms: float


@dataclass
class DayOutcome:
    day_index: int
    scenario: str
    results: dict
    samples: dict
    sample_regions: Optional[np.ndarray] = None


def summarize_day(day_index, scenario_name, latencies, sla_ms):
    lat = np.asarray(latencies, dtype=float)
    sla = np.broadcast_to(np.asarray(sla_ms, dtype=float), lat.shape)
    return DayResult(
        day_index=day_index,
        scenario=scenario_name,
        p50_ms=percentile(lat, 0.50),
        p95_ms=percentile(lat, 0.95),
        p99_ms=percentile(lat, 0.99),
        sla_compliance=float(np.mean(lat <= sla)),
        n=int(lat.size),
        max_ms=float(lat.max()),
    )


def day_scenarios(cfg):
    if cfg.scenario_override is not None:
        return [cfg.scenarios.by_name(cfg.scenario_override)] * cfg.n_days
    return [cfg.scenarios.sample(day_rng(cfg.master_seed, d, Purpose.SCENARIO)) for d in range(cfg.n_days)]


def build_chains(scenarios):
    """把连续同族多日压力日归为一条链，其余日各自成链"""
    chains = []
    for day, scenario in enumerate(scenarios):
        family = scenario.multi_day_family
        if chains and family is not None and scenarios[chains[-1][-1]].multi_day_family == family:
            chains[-1].append(day)
        else:
            chains.append([day])
    return chains


def draw_day(cfg, day_index, scenario, state):
    """生成一天的交易流与公共随机数，返回 (draws, batch, 末状态)"""
    seed = cfg.master_seed
    batch = generate_day_batch(scenario, cfg.n_sample, day_rng(seed, day_index, Purpose.TRAFFIC),
                               institutions=cfg.institutions, profile=cfg.intraday, allocation=cfg.allocation)
    n = len(batch)
    xs, end_state = ar1_path(state, day_rng(seed, day_index, Purpose.AR1).standard_normal(n))
    origin_cities, dest_cities = route_city_arrays(cfg.institutions, batch.origin_idx, batch.dest_idx, cfg.gateway)
    draws = TransactionDraws(
        route=batch.route,
        origin_cities=origin_cities,
        dest_cities=dest_cities,
        needs_payid=batch.needs_payid,
        tls_reconnect=batch.tls_reconnect,
        x=xs,
        net_z=day_rng(seed, day_index, Purpose.NETWORK).standard_normal((n, len(NPP_DRAW_COLUMNS))),
        payid_z=day_rng(seed, day_index, Purpose.PAYID).standard_normal(n),
        sign_z=day_rng(seed, day_index, Purpose.SIGN).standard_normal((n, MAX_SIGNING_HOPS, 2)),
    )
    return draws, batch, end_state


def _stat_subset(draws, sla_ms):
    mask = draws.route == STAT_ROUTE
    if not mask.any():
        mask = np.ones(len(draws), dtype=bool)
    sla = np.array([sla_ms[ROUTE_SLA_KEY[r]] for r in draws.route[mask]], dtype=float)
    return mask, sla


def _simulate_chain(payload):
    """worker 入口：payload = (cfg, [(day, scenario), ...], algo_names, log_on)"""
    cfg, days, algo_names, log_on = payload
    config.LOG = log_on
    env = cfg.env
    algos = [cfg.algorithm(name) for name in algo_names]
    state = replace(cfg.ar1, x=0.0)
    prev = None
    outcomes = []
    for day, scenario in days:
        if prev is not None:
            state = carry_over_or_reset(state, prev, scenario)
        else:
            state = replace(state, x=0.0)
        draws, _, state = draw_day(cfg, day, scenario, state)
        results, samples = {}, {}
        mask, sla = _stat_subset(draws, cfg.sla_ms)
        for algo in algos:
            subset = latency_batch(draws, algo, scenario, env)[mask]
            results[algo.name] = summarize_day(day, scenario.name, subset, sla)
            if day == cfg.analysis_day:
                samples[algo.name] = subset
        regions = draws.origin_cities[mask] if day == cfg.analysis_day else None
        outcomes.append(DayOutcome(day_index=day, scenario=scenario.name, results=results, samples=samples,
                                   sample_regions=regions))
        prev = scenario
    log.debug(f"chain {days[0][0]}..{days[-1][0]} done ({len(days)} days)")
    return outcomes


def _group_chains(chains, workers):
    """相邻链合并成若干任务，每个任务约 n_days / (4·workers) 天"""
    if workers <= 1:
        return [sum(chains, [])] if chains else []
    n_days = sum(len(c) for c in chains)
    target = max(1, math.ceil(n_days / (4 * workers)))
    tasks, current = [], []
    for chain in chains:
        current.extend(chain)
        if len(current) >= target:
            tasks.append(current)
            current = []
    if current:
        tasks.append(current)
    return tasks


class CorpusResult:
    """按算法组织的逐日结果与分析日样本"""

    def __init__(self, cfg, outcomes):
        outcomes = sorted(outcomes, key=lambda o: o.day_index)
        self.cfg = cfg
        self.algorithms = [a.name for a in cfg.algorithms]
        self.scenarios = [o.scenario for o in outcomes]
        self.days = {name: [o.results[name] for o in outcomes] for name in self.algorithms}
        self.samples = {}
        self.sample_regions = None
        for o in outcomes:
            self.samples.update(o.samples)
            if o.sample_regions is not None:
                self.sample_regions = o.sample_regions

    def daily_p99(self, name):
        return np.array([d.p99_ms for d in self.days[name]])

    def daily_maxima(self, name):
        return np.array([d.max_ms for d in self.days[name]])

    def mean_daily_p99(self, name):
        return float(self.daily_p99(name).mean())

    def ci95(self, name):
        values = self.daily_p99(name)
        if values.size < 2:
            m = float(values.mean())
            return m, m
        return ci_mean_t(values)

    def compliance(self, name):
        days = self.days[name]
        total = sum(d.n for d in days)
        return sum(d.sla_compliance * d.n for d in days) / total

    def violations(self, name):
        return int(round(sum((1.0 - d.sla_compliance) * d.n for d in self.days[name])))

    def delta_p99(self, name, baseline=None):
        baseline = config.BASELINE_ALGORITHM if baseline is None else baseline
        if baseline not in self.days:
            return None
        return self.mean_daily_p99(name) - self.mean_daily_p99(baseline)

    def samples_frame(self):
        """分析日样本：每个算法一列，附带发起城市列"""
        frame = pd.DataFrame(self.samples)
        if self.sample_regions is not None and not frame.empty:
            frame[REGION_COLUMN] = self.sample_regions
        return frame

    def region_p99(self, name):
        """分析日样本按发起城市分组的 p99"""
        lat = np.asarray(self.samples[name])
        return {city: percentile(lat[self.sample_regions == city], 0.99)
                for city in sorted(set(self.sample_regions))}

    def to_frame(self, name):
        return pd.DataFrame([{
            'algo': name,
            'day_index': d.day_index,
            'scenario': d.scenario,
            'p50': d.p50_ms,
            'p95': d.p95_ms,
            'p99': d.p99_ms,
            'compliance': d.sla_compliance,
            'max': d.max_ms,
        } for d in self.days[name]])

    def percentile_table(self):
        rows = []
        for name in self.algorithms:
            days = self.days[name]
            lo, hi = self.ci95(name)
            rows.append({
                'algo': name,
                'p50_ms': float(np.mean([d.p50_ms for d in days])),
                'p95_ms': float(np.mean([d.p95_ms for d in days])),
                'p99_ms': self.mean_daily_p99(name),
                'p99_ci_lo_ms': lo,
                'p99_ci_hi_ms': hi,
                'delta_p99_ms': self.delta_p99(name),
                'sla_compliance': self.compliance(name),
                'violations': self.violations(name),
            })
        return pd.DataFrame(rows)

    def scenario_table(self):
        """压力场景表：按场景分组的日均百分位与合规率"""
        frames = []
        for name in self.algorithms:
            df = self.to_frame(name)
            grouped = df.groupby('scenario', sort=False).agg(
                days=('day_index', 'size'), p50=('p50', 'mean'), p95=('p95', 'mean'), p99=('p99', 'mean'),
                compliance=('compliance', 'mean')).reset_index()
            grouped.insert(0, 'algo', name)
            frames.append(grouped)
        return pd.concat(frames, ignore_index=True)


def run_corpus(cfg, algo_names=None):
    algo_names = [a.name for a in cfg.algorithms] if algo_names is None else list(algo_names)
    scenarios = day_scenarios(cfg)
    chains = build_chains(scenarios)
    workers = resolve_worker_count(cfg.n_jobs)
    tasks = _group_chains(chains, workers)
    log.info(f"Corpus: {cfg.n_days} days x {cfg.n_sample} tx, {len(algo_names)} algorithms, "
             f"{len(chains)} chains, {workers} worker(s)")
    payloads = [(cfg, [(d, scenarios[d]) for d in task], algo_names, config.LOG) for task in tasks]
    outcomes = [o for chunk in run_tasks(_simulate_chain, payloads, workers) for o in chunk]
    if len(algo_names) != len(cfg.algorithms):
        cfg = replace(cfg, algorithms=tuple(cfg.algorithm(n) for n in algo_names), reconnect=cfg.reconnect)
    return CorpusResult(cfg, outcomes)


def simulate_day(day_index, algo, cfg):
    """
    单日单算法。AR(1) 状态从该日所在链的起点推进过来，结果与整段语料中的同一天一致。
    """
    if not 0 <= day_index < cfg.n_days:
        raise DomainError(f"day_index {day_index} outside [0, {cfg.n_days})")
    scenarios = day_scenarios(cfg)
    chain = next(c for c in build_chains(scenarios) if day_index in c)
    days = [(d, scenarios[d]) for d in chain if d <= day_index]
    outcome = _simulate_chain((cfg, days, [algo.name], config.LOG))[-1]
    return outcome.results[algo.name]


def dump_day_frame(cfg, day_index=0):
    """审计导出：某日的交易流及各算法的端到端时延（链首日）"""
    scenarios = day_scenarios(cfg)
    scenario = scenarios[day_index]
    draws, batch, _ = draw_day(cfg, day_index, scenario, replace(cfg.ar1, x=0.0))
    frame = batch.to_frame()
    frame.insert(1, 'scenario', scenario.name)
    for algo in cfg.algorithms:
        frame[f"latency_ms[{algo.name}]"] = np.round(latency_batch(draws, algo, scenario, cfg.env), 4)
    return frame
