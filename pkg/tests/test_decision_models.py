import pytest

from common.errors import DomainError
from decision_models import (FORMAT_LIMITS, becs_amortised, cdi, cdi_table, exposure_status, format_compliance,
                             format_matrix, hndl_exposure, hndl_summary, migration_cost_table, migration_frame,
                             phase1_breakdown, projected_volume, route_p99, route_sign_p99, route_specs, route_table,
                             sla_headroom, storage_cost, volume_projection)
from latency_db import builtin_profiles, profile_map

CUMULATIVE_EXPOSED = 9_560_492_450


@pytest.mark.parametrize("delta,p99,expected", [(0.30, 43.69, 0.0069), (1.69, 45.08, 0.0375),
                                                (9986.5, 10029.93, 0.9957)])
def test_cdi_reference_values(delta, p99, expected):
    assert round(cdi(delta, p99).cdi, 4) == expected


def test_cdi_threshold_and_validation():
    assert cdi(0.30, 43.69).passes_threshold
    assert not cdi(9986.5, 10029.93).passes_threshold
    with pytest.raises(DomainError):
        cdi(1.0, 0.0)
    with pytest.raises(DomainError):
        cdi(-0.1, 40.0)


def test_cdi_table_clamps_sampling_noise():
    rows = cdi_table([('ECDSA-P256', -0.004, 43.4), ('Falcon-512', 0.3, 43.7)])
    assert rows[0].cdi == 0.0
    assert rows[1].algo == 'Falcon-512'


def _verdicts():
    return {(v.algo, v.limit_name): v for v in format_matrix(builtin_profiles())}


def test_format_matrix_verdicts():
    v = _verdicts()
    swift = 'SWIFT_MT_2048'
    expected_swift = {
        'ECDSA-P256': 'PASS', 'Falcon-512': 'PASS', 'ML-DSA-44': 'SIG_FAIL', 'Falcon-1024': 'COMBINED_FAIL',
        'ML-DSA-65': 'SIG_FAIL', 'ML-DSA-87': 'SIG_FAIL', 'ML-DSA-65 Hybrid': 'SIG_FAIL',
        'SPHINCS+-SHA2-128s': 'SIG_FAIL',
    }
    for algo, verdict in expected_swift.items():
        assert v[(algo, swift)].verdict == verdict, algo
    for algo in expected_swift:
        assert v[(algo, 'NPP_PAYID_65536')].verdict == 'PASS'
        assert v[(algo, 'TLS_RECORD_16384')].verdict == 'PASS'


def test_hybrid_combined_size_includes_classical_signature():
    hybrid = profile_map()['ML-DSA-65 Hybrid']
    verdict = format_compliance(hybrid)[0]
    assert verdict.combined_bytes == 5317
    assert len(format_compliance(hybrid)) == len(FORMAT_LIMITS)


def test_volume_projection():
    projection = volume_projection()
    assert projection == {2026: 5_200_000, 2027: 6_011_200, 2028: 6_948_947, 2029: 8_032_983}
    assert projected_volume(100, 0.0, 5) == 100
    with pytest.raises(DomainError):
        projected_volume(0, 0.1, 1)


def test_hndl_exposure_rows_and_cumulative():
    rows = hndl_exposure()
    assert [r.year for r in rows] == [2026, 2027, 2028, 2029, 2030]
    assert [r.exposed for r in rows] == ['yes', 'yes', 'yes', 'yes', 'partial']
    assert rows[1].records == 6_011_200 * 365
    assert rows[3].cumulative_exposed == CUMULATIVE_EXPOSED
    assert rows[-1].cumulative_exposed == CUMULATIVE_EXPOSED
    assert rows[-1].tx_per_day == 9_286_128
    assert rows[-1].expected_exposed == pytest.approx(0.5 * 9_286_128 * 365)
    assert rows[0].retained_until == 2033


def test_hndl_summary_storage_cost():
    summary = hndl_summary(hndl_exposure())
    assert summary.cumulative_exposed == CUMULATIVE_EXPOSED
    assert summary.upper_bound == CUMULATIVE_EXPOSED + 9_286_128 * 365
    low, high = summary.storage_usd_per_year
    assert low == pytest.approx(459.0, abs=1.0)
    assert high == pytest.approx(918.0, abs=1.0)


def test_hndl_variants():
    leap = hndl_exposure(days_per_year=366)
    assert leap[-1].cumulative_exposed == 9_586_685_580
    none = hndl_exposure(retention_years=0)
    assert all(r.exposed == 'no' for r in none)
    assert none[-1].cumulative_exposed == 0
    short = hndl_exposure(retention_years=2)
    assert [r.exposed for r in short] == ['no', 'no', 'no', 'yes', 'partial']
    with pytest.raises(DomainError):
        hndl_exposure(crqc_year=2020)


def test_exposure_needs_retention_past_crqc_year():
    # 2029 年数据保留 1 年只到 2030 年，不越过 CRQC 年份
    assert exposure_status(2029, 2030, 1) == 'no'
    assert exposure_status(2029, 2030, 2) == 'yes'
    assert exposure_status(2028, 2030, 2) == 'no'
    assert exposure_status(2028, 2030, 3) == 'yes'
    assert exposure_status(2030, 2030, 1) == 'partial'
    assert exposure_status(2031, 2030, 7) == 'no'


def test_storage_cost_validation():
    assert storage_cost(1_000_000_000, 1000) == pytest.approx(48.0)
    with pytest.raises(DomainError):
        storage_cost(10, 0)


def _route(name):
    return next(r for r in route_specs() if r.name == name)


def test_route_sign_p99_rule():
    profiles = profile_map()
    assert route_sign_p99(profiles['ECDSA-P256']) == pytest.approx(0.15)
    assert route_sign_p99(profiles['ML-DSA-65 Hybrid']) == pytest.approx(1.84)
    assert route_sign_p99(profiles['SPHINCS+-SHA2-128s']) == 297.0
    assert route_sign_p99(profiles['Falcon-512'], npp_delta_p99_ms=0.35) == pytest.approx(0.50)


def test_rits_and_swift_route_composition():
    profiles = profile_map()
    rits, swift = _route('RITS'), _route('SWIFT')
    ecdsa = route_p99(rits, profiles['ECDSA-P256'], 0.15)
    assert round(ecdsa.route_p99_ms, 2) == 277.15
    sphincs = route_p99(rits, profiles['SPHINCS+-SHA2-128s'], 297.0)
    assert round(sphincs.route_p99_ms, 2) == 574.00
    assert sphincs.cdi_route == pytest.approx(0.5172, abs=1e-4)
    assert sphincs.sla_pass
    hybrid = route_p99(swift, profiles['ML-DSA-65 Hybrid'], 1.84)
    assert round(hybrid.route_p99_ms, 2) == 838.84
    assert hybrid.cdi_route == pytest.approx(0.002015, abs=1e-5)


def test_route_table_covers_every_route_and_algorithm():
    table = route_table(builtin_profiles())
    assert len(table) == 2 * 8
    assert set(table['route']) == {'RITS', 'SWIFT'}
    base = table[(table['route'] == 'RITS') & (table['algo'] == 'ECDSA-P256')].iloc[0]
    assert base['delta_vs_baseline_ms'] == 0.0
    with pytest.raises(DomainError):
        route_table(builtin_profiles(), baseline='RSA-2048')


def test_becs_amortised_cost():
    assert becs_amortised(297.0, 50_000) == pytest.approx(0.00594)
    with pytest.raises(DomainError):
        becs_amortised(1.0, 0)


def test_migration_cost_table_sensitivity_bounds():
    phases = migration_cost_table()
    assert [p.annual_cost_usd for p in phases] == [90e6, 21.4e6, 7.6e6, 1.5e6]
    phase1 = phases[1]
    assert phase1.low_usd == pytest.approx(10.7e6)
    assert phase1.high_usd == pytest.approx(32.1e6)
    assert phase1.provenance == 'parametric estimate'
    frame = migration_frame(phases)
    assert frame.loc[0, 'becs_cost_usd'] == pytest.approx(90e6 * 0.35)
    with pytest.raises(DomainError):
        migration_cost_table(sensitivity=1.5)


def test_phase1_breakdown():
    split = phase1_breakdown()
    assert split['big4_usd'] == 14_800_000
    assert split['total_usd'] == pytest.approx(21.4e6, abs=5e3)


def test_sla_headroom():
    assert sla_headroom(44.6) == pytest.approx(1955.4)
    assert sla_headroom(2500.0) < 0
