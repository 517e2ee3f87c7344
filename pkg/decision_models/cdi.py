from dataclasses import dataclass
from typing import Optional

import config
from common.errors import DomainError


@dataclass(frozen=True)
class CdiRecord:
    algo: Optional[str]
    delta_p99_ms: float
    p99_e2e_ms: float
    cdi: float
    passes_threshold: bool


def cdi(delta_p99_ms, p99_e2e_ms, algo=None, threshold=None):
    """Crypto Dilution Index = Δp99 / 端到端 p99；低于阈值视为运营上可忽略"""
    threshold = config.CDI_THRESHOLD if threshold is None else threshold
    if not p99_e2e_ms > 0:
        raise DomainError(f"end-to-end p99 must be positive, got {p99_e2e_ms}")
    if delta_p99_ms < 0:
        raise DomainError(f"delta p99 must be >= 0, got {delta_p99_ms}")
    value = delta_p99_ms / p99_e2e_ms
    return CdiRecord(algo=algo, delta_p99_ms=delta_p99_ms, p99_e2e_ms=p99_e2e_ms, cdi=value,
                     passes_threshold=value < threshold)


def cdi_table(rows, threshold=None):
    """rows: (algo, delta_p99_ms, p99_e2e_ms) 序列；负的 Δ（抽样噪声）按 0 处理"""
    return [cdi(max(0.0, delta), p99, algo=algo, threshold=threshold) for algo, delta, p99 in rows]
