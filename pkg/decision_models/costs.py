"""
迁移成本分阶段表、Phase 1 的 Big 4 / 区域机构拆分，以及 SLA 余量。
成本均为参数化估计，不是报价。
"""
from dataclasses import dataclass

import pandas as pd

import config
from common.errors import DomainError

PROVENANCE = 'parametric estimate'


@dataclass(frozen=True)
class MigrationPhase:
    phase: int
    year: int
    label: str
    activities: str
    annual_cost_usd: float
    becs_fraction: float
    recurring: bool
    low_usd: float
    high_usd: float
    provenance: str = PROVENANCE

    @property
    def becs_cost_usd(self):
        return self.annual_cost_usd * self.becs_fraction


def migration_cost_table(phases=None, sensitivity=None):
    phases = config.MIGRATION_PHASES if phases is None else phases
    sensitivity = config.COST_SENSITIVITY if sensitivity is None else sensitivity
    if not 0 <= sensitivity < 1:
        raise DomainError(f"cost sensitivity must be in [0, 1), got {sensitivity}")
    out = []
    for p in phases:
        cost = float(p['annual_cost_usd'])
        if cost < 0 or not 0 <= p['becs_fraction'] <= 1:
            raise DomainError(f"invalid cost row for phase {p['phase']}")
        out.append(MigrationPhase(phase=p['phase'], year=p['year'], label=p['label'], activities=p['activities'],
                                  annual_cost_usd=cost, becs_fraction=p['becs_fraction'],
                                  recurring=p['recurring'], low_usd=cost * (1 - sensitivity),
                                  high_usd=cost * (1 + sensitivity)))
    return out


def phase1_breakdown(big4_cost=None, regional_cost=None, n_big4=None, n_regional=None):
    big4_cost = config.BIG4_PHASE1_COST_USD if big4_cost is None else big4_cost
    regional_cost = config.REGIONAL_PHASE1_COST_USD if regional_cost is None else regional_cost
    n_big4 = len(config.BIG4_INSTITUTIONS) if n_big4 is None else n_big4
    n_regional = config.REGIONAL_COUNT if n_regional is None else n_regional
    big4 = n_big4 * big4_cost
    regional = n_regional * regional_cost
    return {'big4_usd': big4, 'regional_usd': regional, 'total_usd': big4 + regional}


def migration_frame(phases):
    rows = []
    for p in phases:
        row = dict(p.__dict__)
        row['becs_cost_usd'] = p.becs_cost_usd
        rows.append(row)
    return pd.DataFrame(rows)


def sla_headroom(p99_ms, sla_ms=None):
    """SLA 余量 (ms)；负数表示违约"""
    sla_ms = config.SLA_MS['NPP'] if sla_ms is None else sla_ms
    return sla_ms - p99_ms
