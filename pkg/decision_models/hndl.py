"""
交易量增长与"先收集、后解密"(HNDL) 暴露：
保留期跨过 CRQC 年份的记录视为暴露，CRQC 当年只按比例部分暴露。
"""
from dataclasses import dataclass

import pandas as pd

import config
from common.errors import DomainError

GB = 1e9
EXPOSED_YES, EXPOSED_PARTIAL, EXPOSED_NO = 'yes', 'partial', 'no'


@dataclass(frozen=True)
class HndlRow:
    year: int
    tx_per_day: int
    records: int
    retained_until: int
    exposed: str
    cumulative_exposed: int
    expected_exposed: float


@dataclass(frozen=True)
class HndlSummary:
    cumulative_exposed: int
    expected_exposed: float
    upper_bound: int
    storage_usd_per_year: tuple


def _check_growth(base, rate):
    if base <= 0:
        raise DomainError(f"base volume must be > 0, got {base}")
    if rate <= -1:
        raise DomainError(f"growth rate must be > -1, got {rate}")


def projected_volume(base, rate, years_ahead):
    _check_growth(base, rate)
    return int(round(base * (1.0 + rate) ** years_ahead))


def volume_projection(base=None, rate=None, years=None, base_year=None):
    """{年份: 日交易量}，共 years 年，首年为基数"""
    base = config.GROWTH_BASE_TX_PER_DAY if base is None else base
    rate = config.GROWTH_RATE if rate is None else rate
    years = config.GROWTH_YEARS if years is None else years
    base_year = config.GROWTH_BASE_YEAR if base_year is None else base_year
    _check_growth(base, rate)
    return {base_year + k: projected_volume(base, rate, k) for k in range(years)}


def exposure_status(year, crqc_year, retention_years):
    """保留期须严格越过 CRQC 年份：year + retention_years > crqc_year 才算暴露"""
    if retention_years <= 0:
        return EXPOSED_NO
    if year == crqc_year:
        return EXPOSED_PARTIAL
    if year < crqc_year < year + retention_years:
        return EXPOSED_YES
    return EXPOSED_NO


def hndl_exposure(base=None, rate=None, crqc_year=None, retention_years=None, base_year=None,
                  days_per_year=None, partial_fraction=None):
    """
    每年一行，直到 CRQC 年份（含）。cumulative_exposed 只累计完全暴露的年份；
    expected_exposed 对部分暴露年份乘以 partial_fraction。
    """
    base = config.GROWTH_BASE_TX_PER_DAY if base is None else base
    rate = config.GROWTH_RATE if rate is None else rate
    crqc_year = config.CRQC_YEAR if crqc_year is None else crqc_year
    retention_years = config.RETENTION_YEARS if retention_years is None else retention_years
    base_year = config.GROWTH_BASE_YEAR if base_year is None else base_year
    days_per_year = config.DAYS_PER_YEAR if days_per_year is None else days_per_year
    partial_fraction = config.PARTIAL_EXPOSURE_FRACTION if partial_fraction is None else partial_fraction
    _check_growth(base, rate)
    if retention_years < 0:
        raise DomainError(f"retention years must be >= 0, got {retention_years}")
    if crqc_year < base_year:
        raise DomainError(f"CRQC year {crqc_year} precedes base year {base_year}")

    rows, cumulative = [], 0
    for year in range(base_year, crqc_year + 1):
        tx = projected_volume(base, rate, year - base_year)
        records = tx * days_per_year
        status = exposure_status(year, crqc_year, retention_years)
        if status == EXPOSED_YES:
            cumulative += records
            expected = float(records)
        elif status == EXPOSED_PARTIAL:
            expected = partial_fraction * records
        else:
            expected = 0.0
        rows.append(HndlRow(year=year, tx_per_day=tx, records=records, retained_until=year + retention_years,
                            exposed=status, cumulative_exposed=cumulative, expected_exposed=expected))
    return rows


def storage_cost(records, bytes_per_record, usd_per_gb_month=None):
    """冷存储年成本 (USD)，1 GB = 10^9 B"""
    usd_per_gb_month = config.STORAGE_USD_PER_GB_MONTH if usd_per_gb_month is None else usd_per_gb_month
    if records < 0 or bytes_per_record <= 0:
        raise DomainError("storage cost needs records >= 0 and bytes per record > 0")
    return records * bytes_per_record / GB * usd_per_gb_month * 12


def hndl_summary(rows, bytes_per_record=None):
    bytes_per_record = config.STORAGE_BYTES_PER_RECORD if bytes_per_record is None else bytes_per_record
    cumulative = rows[-1].cumulative_exposed if rows else 0
    expected = sum(r.expected_exposed for r in rows)
    upper = sum(r.records for r in rows if r.exposed != EXPOSED_NO)
    costs = tuple(storage_cost(cumulative, b) for b in bytes_per_record)
    return HndlSummary(cumulative_exposed=cumulative, expected_exposed=expected, upper_bound=upper,
                       storage_usd_per_year=costs)


def hndl_frame(rows):
    return pd.DataFrame([r.__dict__ for r in rows])
