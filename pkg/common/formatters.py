import math


def _is_number(value):
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def _is_missing(value):
    if not _is_number(value):
        return True
    return isinstance(value, float) and math.isnan(value)


def format_ms(value, default="N/A"):
    """时延统一保留 2 位小数（ms）"""
    if _is_missing(value):
        return default
    if math.isinf(float(value)):
        return "inf"
    return f"{float(value):.2f}"


def format_percent(value, digits=2, default="N/A"):
    if _is_missing(value):
        return default
    return f"{float(value):.{digits}%}"


def format_int(value, default="N/A"):
    if _is_missing(value):
        return default
    return f"{int(round(float(value))):,}"


def format_usd(value, default="N/A"):
    if _is_missing(value):
        return default
    amount = float(value)
    if abs(amount) >= 1_000_000:
        return f"${amount / 1_000_000:.1f}M"
    if abs(amount) >= 1_000:
        return f"${amount / 1_000:.1f}K"
    return f"${amount:.2f}"


def format_headline(summary):
    """把 summary.json 的头条数字整理为可打印字典"""
    summary = summary or {}
    return {
        "baseline_p99_ms": format_ms(summary.get("baseline_p99_ms")),
        "max_delta_p99_ms": format_ms(summary.get("max_delta_p99_ms")),
        "min_compliance": format_percent(summary.get("min_compliance"), digits=3),
        "saturated_algorithms": ", ".join(summary.get("saturated_algorithms") or []) or "none",
        "hndl_cumulative": format_int(summary.get("hndl_cumulative")),
        "phase1_usd": format_usd(summary.get("phase1_usd")),
    }


# 表格发射时按 4 位小数取整的比例类列
FRACTION_COLUMNS = {
    'compliance', 'sla_compliance', 'rho', 'erlang_c', 'cdi', 'cdi_route', 'eta2', 'mw_p', 'ks_p', 'ks_stat',
    'ad_stat', 'xi', 'becs_fraction', 'cv', 'utilisation_ratio', 'psa_margin',
}
MS_SUFFIXES = ('_ms',)
MS_COLUMNS = {'p50', 'p95', 'p99', 'max', 'mean_p99', 'ci_low', 'ci_high', 'q99', 'q999', 'q9999',
              'ci999_low', 'ci999_high', 'ci9999_low', 'ci9999_high', 'loc', 'scale',
              'p99_normal', 'p99_degraded'}


def round_frame(frame):
    """
    发射前的统一取整：ms 列 2 位，比例列 4 位，计数列保持原样。
    CSV 与 JSON 都从取整后的同一张表写出。
    """
    out = frame.copy()
    for col in out.columns:
        if out[col].dtype.kind != 'f':
            continue
        if col in FRACTION_COLUMNS or col.endswith('_fraction'):
            out[col] = out[col].round(4)
        elif col in MS_COLUMNS or col.endswith(MS_SUFFIXES):
            out[col] = out[col].round(2)
    return out


def slugify(name):
    """算法名 -> 文件名片段，如 'ML-DSA-65 Hybrid' -> 'ml-dsa-65-hybrid'"""
    chars = [c.lower() if c.isalnum() else '-' for c in str(name)]
    slug = ''.join(chars)
    while '--' in slug:
        slug = slug.replace('--', '-')
    return slug.strip('-')
