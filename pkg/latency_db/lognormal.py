"""
对数正态分布工具：矩估计拟合、解析矩、分位数与抽样。
模拟器中所有签名与网络 hop 的随机时延都经由这里采样。
"""
import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from common.errors import DomainError


@dataclass(frozen=True)
class LogNormalParams:
    mu_ln: float
    sigma_ln: float

    def __post_init__(self):
        if not self.sigma_ln >= 0:
            raise DomainError(f"sigma_ln must be >= 0, got {self.sigma_ln}")

    def frozen(self):
        """scipy 冻结分布，scipy 的参数化为 s=sigma, scale=exp(mu)"""
        return stats.lognorm(s=self.sigma_ln, scale=math.exp(self.mu_ln))


def fit_lognormal(mean, std):
    """
    矩估计：sigma² = ln(1 + (std/mean)²)，mu = ln(mean) - sigma²/2。
    """
    if not mean > 0:
        raise DomainError(f"lognormal mean must be positive, got {mean}")
    if std < 0:
        raise DomainError(f"lognormal std must be non-negative, got {std}")
    sigma2 = math.log1p((std / mean) ** 2)
    return LogNormalParams(mu_ln=math.log(mean) - sigma2 / 2.0, sigma_ln=math.sqrt(sigma2))


def lognormal_moments(params):
    """返回 (mean, std)"""
    sigma2 = params.sigma_ln ** 2
    mean = math.exp(params.mu_ln + sigma2 / 2.0)
    return mean, mean * math.sqrt(math.expm1(sigma2))


def lognormal_quantile(params, q):
    if params.sigma_ln == 0:
        return math.exp(params.mu_ln)
    return float(params.frozen().ppf(q))


def sample_lognormal(params, rng, size=None):
    """exp(mu + sigma·z)，z 取自调用方持有的 rng"""
    z = rng.standard_normal(size)
    return np.exp(params.mu_ln + params.sigma_ln * z)


def from_standard_normal(params, z):
    """把外部提供的标准正态抽样变换为对数正态（公共随机数用）"""
    return np.exp(params.mu_ln + params.sigma_ln * np.asarray(z))
