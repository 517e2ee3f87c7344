"""
日内到达强度：六分量高斯混合，截断在 [0, 24) 并按截断质量归一，
使 24 小时积分恰好等于日交易量。
"""
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr, ndtri

import config
from common.errors import ConfigError, DomainError

SECONDS_PER_HOUR = 3600.0
SECONDS_PER_DAY = 86400.0


@dataclass(frozen=True)
class TimeOfDayProfile:
    components: tuple

    def __post_init__(self):
        if len(self.components) == 0:
            raise ConfigError("intraday mixture needs at least one component")
        weights = [c[0] for c in self.components]
        if any(w < 0 for w in weights) or abs(sum(weights) - 1.0) > 1e-9:
            raise ConfigError(f"intraday mixture weights must be >= 0 and sum to 1 (got {sum(weights):.6f})")
        if any(c[2] <= 0 for c in self.components):
            raise ConfigError("intraday mixture std_hour must be positive")

    @property
    def weights(self):
        return np.array([c[0] for c in self.components], dtype=float)

    @property
    def means(self):
        return np.array([c[1] for c in self.components], dtype=float)

    @property
    def stds(self):
        return np.array([c[2] for c in self.components], dtype=float)

    def _window_mass(self):
        """每个分量落在 [0, 24) 内的概率质量"""
        return ndtr((24.0 - self.means) / self.stds) - ndtr(-self.means / self.stds)

    def density(self, hour):
        """截断混合密度（每小时），[0,24) 上积分为 1"""
        h = np.asarray(hour, dtype=float)[..., None]
        pdf = np.exp(-0.5 * ((h - self.means) / self.stds) ** 2) / (self.stds * np.sqrt(2 * np.pi))
        return (pdf * self.weights).sum(axis=-1) / float((self.weights * self._window_mass()).sum())


def default_profile(components=None):
    components = config.INTRADAY_MIXTURE if components is None else components
    return TimeOfDayProfile(tuple(tuple(float(v) for v in c) for c in components))


def intraday_rate(hour, profile, daily_volume):
    """给定小时的到达率 (TPS)"""
    if not 0 <= hour < 24:
        raise DomainError(f"hour must be in [0, 24), got {hour}")
    return float(profile.density(hour)) * daily_volume / SECONDS_PER_HOUR


def institution_daily_volume(scenario, base_tps=None, reference_volume=None):
    """
    单机构 NPP 日交易量：基准到达率 × 86,400 s，再按场景 NPP 量相对正常日缩放。
    """
    base_tps = config.ROUTE_LAMBDA_TPS['NPP'] if base_tps is None else base_tps
    reference_volume = config.REFERENCE_VOLUMES['NPP'] if reference_volume is None else reference_volume
    return base_tps * SECONDS_PER_DAY * scenario.npp_per_day / reference_volume


def sample_hours(profile, rng, size):
    """
    先按截断质量加权选分量，再在 [0, 24) 内做截断正态逆变换抽样。
    """
    mass = profile._window_mass()
    p = profile.weights * mass
    comp = rng.choice(len(p), size=size, p=p / p.sum())
    u = rng.random(size)
    lo = ndtr(-profile.means[comp] / profile.stds[comp])
    hi = ndtr((24.0 - profile.means[comp]) / profile.stds[comp])
    hours = profile.means[comp] + profile.stds[comp] * ndtri(lo + u * (hi - lo))
    # 浮点误差可能落到 24.0
    return np.clip(hours, 0.0, np.nextafter(24.0, 0.0))
