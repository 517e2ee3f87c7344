"""
GEV 块极大值分析：极大似然拟合（多起点、形状参数有界）、分位数、百分位 bootstrap 置信区间。

形状参数 xi 采用气候/水文惯例：xi > 0 为 Fréchet 厚尾。
scipy.stats.genextreme 的形状参数 c = -xi。
"""
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import optimize, stats

import config
from common import log
from common.errors import DomainError, FitError

EULER_GAMMA = 0.5772156649015329
MIN_MAXIMA = 20
REPORT_QUANTILES = (0.99, 0.999, 0.9999)


@dataclass(frozen=True)
class GevFit:
    xi: float
    loc: float
    scale: float
    n_blocks: int
    loglik: float = float('nan')

    def __post_init__(self):
        if not self.scale > 0:
            raise DomainError(f"GEV scale must be > 0, got {self.scale}")

    def frozen(self):
        return stats.genextreme(c=-self.xi, loc=self.loc, scale=self.scale)


@dataclass(frozen=True)
class GevReport:
    fit: GevFit
    q99: float
    q999: float
    q9999: float
    ci999: tuple
    ci9999: tuple
    tail_class: str
    mode: str = 'block'
    indicative: bool = True
    bootstrap_failures: int = 0
    n_resamples: int = 0
    notes: list = field(default_factory=list)


def block_maxima(samples, block_size=None):
    block_size = config.GEV_BLOCK_SIZE if block_size is None else block_size
    arr = np.asarray(samples, dtype=float)
    n_blocks = arr.size // block_size
    if n_blocks < 2:
        raise DomainError(f"need at least 2 complete blocks of {block_size}, got {arr.size} samples")
    dropped = arr.size - n_blocks * block_size
    if dropped:
        log.debug(f"block maxima: dropped trailing partial block of {dropped} samples")
    return arr[:n_blocks * block_size].reshape(n_blocks, block_size).max(axis=1)


def _neg_loglik(theta, x):
    xi, loc, log_scale = theta
    value = -np.sum(stats.genextreme.logpdf(x, c=-xi, loc=loc, scale=math.exp(log_scale)))
    return value if np.isfinite(value) else 1e300


def _gumbel_start(x):
    scale = max(math.sqrt(6.0) * float(np.std(x, ddof=1)) / math.pi, 1e-9)
    return float(np.mean(x)) - EULER_GAMMA * scale, scale


def _starts(x, bounds):
    loc0, scale0 = _gumbel_start(x)
    starts = []
    for xi0 in (0.0, 0.1, -0.1):
        for dl, ds in ((0.0, 1.0), (0.25, 0.8), (-0.25, 1.25)):
            xi0 = min(max(xi0, bounds[0]), bounds[1])
            starts.append((xi0, loc0 + dl * scale0, math.log(scale0 * ds)))
    return starts


def fit_gev_mle(maxima, xi_bounds=None, starts=None):
    """
    极大似然拟合，L-BFGS-B 在 (xi, loc, log scale) 上优化，xi 限定在 xi_bounds。
    所有起点都不收敛时抛出 FitError，diagnostics 为各起点的优化结果。
    """
    xi_bounds = config.GEV_XI_BOUNDS if xi_bounds is None else xi_bounds
    x = np.asarray(maxima, dtype=float)
    if x.size < MIN_MAXIMA:
        raise DomainError(f"GEV fit needs at least {MIN_MAXIMA} maxima, got {x.size}")
    if np.ptp(x) == 0:
        raise FitError("GEV fit on constant maxima is degenerate (scale -> 0)")

    starts = _starts(x, xi_bounds) if starts is None else starts
    bounds = [tuple(xi_bounds), (None, None), (None, None)]
    best, diagnostics = None, []
    for start in starts:
        res = optimize.minimize(_neg_loglik, np.asarray(start, dtype=float), args=(x,), method='L-BFGS-B',
                                bounds=bounds, options={'ftol': 1e-14, 'gtol': 1e-8, 'maxiter': 2000})
        diagnostics.append({'start': tuple(start), 'success': bool(res.success), 'nll': float(res.fun),
                            'message': str(res.message)})
        if res.fun < 1e300 and (best is None or res.fun < best.fun):
            best = res
    if best is None:
        raise FitError("GEV maximum likelihood did not converge from any start", diagnostics)
    xi, loc, log_scale = best.x
    return GevFit(xi=float(xi), loc=float(loc), scale=math.exp(log_scale), n_blocks=int(x.size),
                  loglik=-float(best.fun))


def gev_quantile(fit, q):
    """GEV 逆分布函数；|xi| < 1e-8 时取 Gumbel 极限"""
    if not 0 < q < 1:
        raise DomainError(f"quantile must be in (0, 1), got {q}")
    y = -math.log(q)
    if abs(fit.xi) < 1e-8:
        return fit.loc - fit.scale * math.log(y)
    return fit.loc + fit.scale * (y ** (-fit.xi) - 1.0) / fit.xi


def classify_tail(xi):
    if xi >= 0.05:
        return 'Frechet'
    if xi <= -0.05:
        return 'Weibull'
    return 'Gumbel'


def bootstrap_quantiles(maxima, qs, n_resamples=None, rng=None, fit=None):
    """
    有放回重抽样后重新拟合，返回 (n_ok, len(qs)) 的分位数矩阵与失败次数。
    重拟合从全样本估计出发，只用单起点。
    """
    n_resamples = config.GEV_BOOTSTRAP if n_resamples is None else n_resamples
    rng = np.random.default_rng(config.MASTER_SEED) if rng is None else rng
    x = np.asarray(maxima, dtype=float)
    fit = fit_gev_mle(x) if fit is None else fit
    start = [(fit.xi, fit.loc, math.log(fit.scale))]
    values, failures = [], 0
    for _ in range(n_resamples):
        sample = x[rng.integers(0, x.size, size=x.size)]
        try:
            refit = fit_gev_mle(sample, starts=start)
        except FitError:
            failures += 1
            continue
        values.append([gev_quantile(refit, q) for q in qs])
    return np.asarray(values, dtype=float).reshape(-1, len(qs)), failures


def _percentile_interval(values, confidence):
    alpha = (1.0 - confidence) / 2.0
    return float(np.quantile(values, alpha)), float(np.quantile(values, 1.0 - alpha))


def bootstrap_ci(maxima, q, n_resamples=None, confidence=0.95, rng=None):
    x = np.asarray(maxima, dtype=float)
    if x.size and np.ptp(x) == 0:
        return float(x[0]), float(x[0])
    values, failures = bootstrap_quantiles(x, [q], n_resamples, rng)
    if failures > 0.1 * max(1, failures + len(values)):
        log.warning(f"GEV bootstrap: {failures} of {failures + len(values)} resample fits failed")
    if len(values) == 0:
        raise FitError("every bootstrap resample failed to fit")
    return _percentile_interval(values[:, 0], confidence)


def gev_report(maxima, mode='block', n_resamples=None, confidence=0.95, rng=None):
    """
    完整报告：点估计、三档分位数与 p99.9 / p99.99 的 bootstrap 区间。
    within-day 块极大值违反独立同分布假设，标记为 indicative；daily 模式每日一块。
    """
    n_resamples = config.GEV_BOOTSTRAP if n_resamples is None else n_resamples
    fit = fit_gev_mle(maxima)
    q99, q999, q9999 = (gev_quantile(fit, q) for q in REPORT_QUANTILES)
    values, failures = bootstrap_quantiles(maxima, REPORT_QUANTILES[1:], n_resamples, rng, fit=fit)
    notes = []
    if failures > 0.1 * n_resamples:
        notes.append(f"{failures} of {n_resamples} bootstrap refits failed")
        log.warning(f"GEV bootstrap: {notes[-1]}")
    if len(values) == 0:
        raise FitError("every bootstrap resample failed to fit")
    return GevReport(
        fit=fit,
        q99=q99,
        q999=q999,
        q9999=q9999,
        ci999=_percentile_interval(values[:, 0], confidence),
        ci9999=_percentile_interval(values[:, 1], confidence),
        tail_class=classify_tail(fit.xi),
        mode=mode,
        indicative=(mode == 'block'),
        bootstrap_failures=failures,
        n_resamples=n_resamples,
        notes=notes,
    )


def daily_maxima_report(daily_maxima, n_resamples=None, rng=None) -> Optional[GevReport]:
    """每日最大值作为一块；天数不足以拟合时返回 None"""
    if len(daily_maxima) < MIN_MAXIMA:
        log.warning(f"daily-maxima GEV skipped: {len(daily_maxima)} days < {MIN_MAXIMA}")
        return None
    return gev_report(daily_maxima, mode='daily', n_resamples=n_resamples, rng=rng)
