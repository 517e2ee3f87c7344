"""
AR(1) 网络抖动：x_t = α·x_{t-1} + (1-α)·ε_t，ε_t ~ N(0, σ_ε²)，
时延按 L_t = L_base × (1 + σ_AR·x_t) 放大，并在下限处截断。
状态在同一多日压力场景（crash / christmas）的连续日之间延续，其余日边界归零。
"""
from dataclasses import dataclass, replace

import numpy as np
from scipy.signal import lfilter

import config
from common.errors import DomainError


@dataclass(frozen=True)
class Ar1State:
    x: float = 0.0
    alpha: float = config.AR1_ALPHA
    sigma_ar: float = config.AR1_SIGMA_AR
    sigma_eps: float = config.AR1_SIGMA_EPS

    def __post_init__(self):
        if not abs(self.alpha) < 1:
            raise DomainError(f"AR(1) persistence must satisfy |alpha| < 1, got {self.alpha}")

    @property
    def stationary_variance(self):
        return (1 - self.alpha) ** 2 * self.sigma_eps ** 2 / (1 - self.alpha ** 2)


def ar1_step(state, rng):
    eps = state.sigma_eps * rng.standard_normal()
    return replace(state, x=state.alpha * state.x + (1 - state.alpha) * eps)


def ar1_path(state, innovations):
    """
    向量化推进：innovations 为标准正态序列，返回每一步的 x 与末状态。
    等价于逐步调用 ar1_step，初值通过 lfilter 的 zi 注入。
    """
    eps = state.sigma_eps * np.asarray(innovations, dtype=float)
    if eps.size == 0:
        return eps, state
    xs, _ = lfilter([1 - state.alpha], [1.0, -state.alpha], eps, zi=[state.alpha * state.x])
    return xs, replace(state, x=float(xs[-1]))


def jitter_factor(x, sigma_ar=config.AR1_SIGMA_AR):
    """乘性抖动系数 1 + σ_AR·x，x 可为标量或逐笔状态数组"""
    return 1.0 + sigma_ar * np.asarray(x)


def apply_jitter(base_ms, state, floor_ms=None):
    floor_ms = config.JITTER_FLOOR_MS if floor_ms is None else floor_ms
    if np.any(np.asarray(base_ms) <= 0):
        raise DomainError("jitter base latency must be positive")
    jittered = np.maximum(np.asarray(base_ms) * jitter_factor(state.x, state.sigma_ar), floor_ms)
    return float(jittered) if jittered.ndim == 0 else jittered


def _family(scenario):
    return getattr(scenario, 'multi_day_family', None)


def carry_over_or_reset(state, prev_scenario, next_scenario):
    family = _family(prev_scenario)
    if family is not None and family == _family(next_scenario):
        return state
    return replace(state, x=0.0)
