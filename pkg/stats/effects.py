"""
效应量与组间比较：Cohen's d、Mann-Whitney U、单因素方差分析 η²。
"""
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
import pandas as pd
from scipy import stats

from common.errors import DomainError

# (下限, 标签)，按 |d| 从大到小匹配
MAGNITUDES = ((2.0, 'Huge'), (1.2, 'Very Large'), (0.8, 'Large'), (0.5, 'Medium'), (0.2, 'Small'))
OFF_SCALE_D = 1e3


@dataclass(frozen=True)
class EffectSize:
    cohens_d: float
    magnitude: str
    mw_u: Optional[float] = None
    mw_p: Optional[float] = None

    @property
    def off_scale(self):
        return self.magnitude == 'Off-scale'


def magnitude_label(d):
    if not math.isfinite(d) or abs(d) > OFF_SCALE_D:
        return 'Off-scale'
    for bound, label in MAGNITUDES:
        if abs(d) >= bound:
            return label
    return 'Negligible'


def cohens_d(a, baseline):
    """d = (mean_A - mean_B) / sqrt((s_A² + s_B²) / 2)，PQC 均值更大时为正"""
    a = np.asarray(a, dtype=float)
    b = np.asarray(baseline, dtype=float)
    if a.size == 0 or b.size == 0:
        raise DomainError("Cohen's d needs two non-empty samples")
    diff = float(a.mean() - b.mean())
    var_a = float(a.var(ddof=1)) if a.size > 1 else 0.0
    var_b = float(b.var(ddof=1)) if b.size > 1 else 0.0
    pooled = math.sqrt((var_a + var_b) / 2.0)
    if pooled == 0:
        d = 0.0 if diff == 0 else math.copysign(math.inf, diff)
    else:
        d = diff / pooled
    return EffectSize(cohens_d=d, magnitude=magnitude_label(d))


def mann_whitney_u(a, b):
    """双侧 U 检验（正态近似 + 结校正），返回第一组的 U"""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.size == 0 or b.size == 0:
        raise DomainError("Mann-Whitney U needs two non-empty samples")
    pooled = np.concatenate([a, b])
    if np.ptp(pooled) == 0:
        # 全部相同：秩和无差异，渐近方差为 0
        return a.size * b.size / 2.0, 1.0
    res = stats.mannwhitneyu(a, b, alternative='two-sided', method='asymptotic', use_continuity=True)
    return float(res.statistic), float(res.pvalue)


def effect_size(a, baseline):
    d = cohens_d(a, baseline)
    u, p = mann_whitney_u(a, baseline)
    return EffectSize(cohens_d=d.cohens_d, magnitude=d.magnitude, mw_u=u, mw_p=p)


def anova_eta2(groups):
    """
    η² = SS_between / SS_total，F = (SS_between/(k-1)) / (SS_within/(N-k))。
    总方差为 0 时约定 η² = 0。
    """
    groups = [np.asarray(g, dtype=float) for g in groups]
    if len(groups) < 2:
        raise DomainError(f"ANOVA needs at least 2 groups, got {len(groups)}")
    if any(g.size < 2 for g in groups):
        raise DomainError("every ANOVA group needs at least 2 values")

    everything = np.concatenate(groups)
    grand = everything.mean()
    ss_total = float(((everything - grand) ** 2).sum())
    ss_between = float(sum(g.size * (g.mean() - grand) ** 2 for g in groups))
    ss_within = max(ss_total - ss_between, 0.0)
    k, n = len(groups), everything.size

    if ss_total == 0:
        return 0.0, float('nan')
    eta2 = min(max(ss_between / ss_total, 0.0), 1.0)
    if ss_within == 0:
        return eta2, math.inf
    f_stat = (ss_between / (k - 1)) / (ss_within / (n - k))
    return eta2, float(f_stat)


def anova_factor(values, labels):
    """
    按因子水平分组后做单因素 ANOVA，少于 2 个值的水平直接丢弃。
    返回 (eta2, f_stat, 保留的水平数)。
    """
    values = np.asarray(values, dtype=float)
    labels = np.asarray(labels)
    if values.shape != labels.shape:
        raise DomainError(f"values and labels differ in shape: {values.shape} vs {labels.shape}")
    groups = [values[labels == level] for level in pd.unique(labels)]
    groups = [g for g in groups if g.size >= 2]
    eta2, f_stat = anova_eta2(groups)
    return eta2, f_stat, len(groups)
