"""
拟合优度：对拟合对数正态的单样本 KS、ln(x) 复合正态性的 Anderson-Darling，
以及对数正态 / gamma / Weibull / 逆高斯的 AIC、BIC 比较。

KS 的 p 值取渐近 Kolmogorov 分布，不做 Lilliefors 修正（参数由同一样本估计，检验偏保守）。
"""
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import stats

import config
from common.errors import DomainError
from latency_db.lognormal import LogNormalParams

CANDIDATES = ('lognormal', 'gamma', 'weibull', 'inverse-gaussian')


@dataclass(frozen=True)
class GofReport:
    n: int
    ks_stat: float
    ks_p: float
    ad_stat: float
    ad_critical_5pct: float
    reject_ks: bool
    reject_ad: bool


@dataclass(frozen=True)
class CandidateFit:
    name: str
    available: bool
    k: int = 2
    loglik: float = float('nan')
    aic: float = float('nan')
    bic: float = float('nan')
    delta_aic: float = float('nan')
    params: tuple = ()
    error: Optional[str] = None


@dataclass(frozen=True)
class ModelComparison:
    n: int
    candidates: tuple

    @property
    def ranked(self):
        ok = [c for c in self.candidates if c.available]
        return sorted(ok, key=lambda c: c.aic)

    @property
    def best(self):
        ranked = self.ranked
        return ranked[0] if ranked else None

    def by_name(self, name):
        for c in self.candidates:
            if c.name == name:
                return c
        raise KeyError(name)


def fit_lognormal_mle(samples):
    """对数正态 MLE：ln(x) 的均值与总体标准差"""
    logs = _logs(samples)
    return LogNormalParams(mu_ln=float(logs.mean()), sigma_ln=float(logs.std()))


def _logs(samples):
    x = np.asarray(samples, dtype=float)
    if np.any(x <= 0):
        raise DomainError("log-normality tests need strictly positive samples")
    return np.log(x)


def ks_test_lognormal(samples, params=None):
    x = np.asarray(samples, dtype=float)
    if x.size < 2:
        raise DomainError(f"KS test needs at least 2 samples, got {x.size}")
    params = fit_lognormal_mle(x) if params is None else params
    res = stats.kstest(x, params.frozen().cdf, method='asymp')
    return float(res.statistic), float(res.pvalue)


def ad_test_log_normality(samples, critical=None):
    """
    ln(samples) 的复合正态 AD 统计量，乘以小样本修正 (1 + 4/n - 25/n²)，
    与 5% 临界值比较。
    """
    critical = config.AD_CRITICAL_5PCT if critical is None else critical
    logs = _logs(samples)
    n = logs.size
    if n < 8:
        raise DomainError(f"AD test needs at least 8 samples, got {n}")
    if np.ptp(logs) == 0:
        raise DomainError("AD test on constant samples is undefined")
    a2 = float(stats.anderson(logs, dist='norm').statistic)
    adjusted = a2 * (1.0 + 4.0 / n - 25.0 / n ** 2)
    return adjusted, adjusted > critical


def gof_report(samples, params=None):
    x = np.asarray(samples, dtype=float)
    ks_stat, ks_p = ks_test_lognormal(x, params)
    ad_stat, reject_ad = ad_test_log_normality(x)
    return GofReport(n=int(x.size), ks_stat=ks_stat, ks_p=ks_p, ad_stat=ad_stat,
                     ad_critical_5pct=config.AD_CRITICAL_5PCT, reject_ks=ks_p < 0.05, reject_ad=reject_ad)


def _fit_candidate(name, x):
    if name == 'lognormal':
        p = fit_lognormal_mle(x)
        params = (p.sigma_ln, 0.0, math.exp(p.mu_ln))
        return params, stats.lognorm.logpdf(x, *params).sum()
    if name == 'gamma':
        params = stats.gamma.fit(x, floc=0)
        return params, stats.gamma.logpdf(x, *params).sum()
    if name == 'weibull':
        params = stats.weibull_min.fit(x, floc=0)
        return params, stats.weibull_min.logpdf(x, *params).sum()
    if name == 'inverse-gaussian':
        # 闭式 MLE：mu = 均值，lambda = n / Σ(1/x - 1/mu)；scipy 参数化为 invgauss(mu/lambda, scale=lambda)
        mu = x.mean()
        lam = x.size / np.sum(1.0 / x - 1.0 / mu)
        params = (mu / lam, 0.0, lam)
        return params, stats.invgauss.logpdf(x, *params).sum()
    raise DomainError(f"unknown candidate distribution '{name}'")


def aic_bic_compare(samples, candidates=CANDIDATES):
    x = np.asarray(samples, dtype=float)
    n = x.size
    if n < 30:
        raise DomainError(f"model comparison needs at least 30 samples, got {n}")
    if np.any(x <= 0):
        raise DomainError("model comparison needs strictly positive samples")
    unknown = [name for name in candidates if name not in CANDIDATES]
    if unknown:
        raise DomainError(f"unknown candidate distribution(s): {', '.join(unknown)}")

    fitted = []
    for name in candidates:
        try:
            params, loglik = _fit_candidate(name, x)
            if not np.isfinite(loglik):
                raise FloatingPointError("non-finite log-likelihood")
        except (FloatingPointError, RuntimeError, ValueError) as e:
            fitted.append(CandidateFit(name=name, available=False, error=str(e)))
            continue
        k = 2
        fitted.append(CandidateFit(name=name, available=True, k=k, loglik=float(loglik),
                                   aic=2 * k - 2 * float(loglik), bic=k * math.log(n) - 2 * float(loglik),
                                   params=tuple(float(v) for v in params)))

    best_aic = min((c.aic for c in fitted if c.available), default=float('nan'))
    candidates_out = tuple(
        CandidateFit(**{**c.__dict__, 'delta_aic': c.aic - best_aic}) if c.available else c for c in fitted)
    return ModelComparison(n=n, candidates=candidates_out)
