import pytest

from common.errors import ConfigError, DomainError
from latency_db import (EmpiricalStat, builtin_profiles, derive_service_mean_from_rho, empirical_stats, fit_lognormal,
                        lognormal_moments, lognormal_quantile, profile_map, profiles_from_records)


def _record(**overrides):
    base = {'name': 'TestSig', 'mode': 'pqc-only', 'rho_ref': 0.001, 'pk_bytes': 100, 'sig_bytes': 200}
    base.update(overrides)
    return base


def test_fit_lognormal_recovers_moments():
    params = fit_lognormal(10.0, 3.0)
    mean, std = lognormal_moments(params)
    assert mean == pytest.approx(10.0)
    assert std == pytest.approx(3.0)


def test_fit_lognormal_zero_std_is_degenerate():
    params = fit_lognormal(5.0, 0.0)
    assert params.sigma_ln == 0.0
    assert lognormal_quantile(params, 0.99) == pytest.approx(5.0)


@pytest.mark.parametrize("mean,std", [(0.0, 1.0), (-1.0, 1.0), (1.0, -0.5)])
def test_fit_lognormal_rejects_invalid_moments(mean, std):
    with pytest.raises(DomainError):
        fit_lognormal(mean, std)


def test_derive_service_mean_from_published_utilisation():
    # ρ = 1.8855 at λ = 13.5, c = 2
    assert derive_service_mean_from_rho(13.5, 2, 1.8855) == pytest.approx(279_333.33, abs=0.01)
    with pytest.raises(DomainError):
        derive_service_mean_from_rho(13.5, 2, 0.0)


def test_builtin_profiles_cover_eight_algorithms_in_order():
    names = [p.name for p in builtin_profiles()]
    assert names == ['ECDSA-P256', 'Falcon-512', 'ML-DSA-44', 'Falcon-1024', 'ML-DSA-65', 'ML-DSA-87',
                     'ML-DSA-65 Hybrid', 'SPHINCS+-SHA2-128s']


def test_sphincs_service_rate_matches_saturation_boundary():
    sphincs = profile_map()['SPHINCS+-SHA2-128s']
    assert sphincs.mu_ops == pytest.approx(3.58, abs=1e-3)
    assert sphincs.is_saturating
    assert not profile_map()['ML-DSA-87'].is_saturating


def test_hybrid_profile_links_classical_signature():
    hybrid = profile_map()['ML-DSA-65 Hybrid']
    assert hybrid.classical.name == 'ECDSA-P256'
    assert hybrid.combined_sig_bytes == 3293 + 72
    assert hybrid.classical_sign_mean_us == pytest.approx(hybrid.classical.sign_mean_us)
    # 服务时间覆盖 PQC + 经典两次签名
    assert hybrid.service_mean_us >= hybrid.sign_mean_us + hybrid.classical_sign_mean_us - 1e-2


def test_hop_crypto_mean_increases_with_published_delta():
    profiles = [p for p in builtin_profiles() if not p.is_saturating]
    means = [p.hop_crypto_mean_us for p in profiles]
    assert means == sorted(means)


def test_profiles_from_records_collects_every_problem():
    records = [_record(name='A', pk_bytes=0), _record(name='B', mode='quantum'), _record(name='C', mode='hybrid')]
    with pytest.raises(ConfigError) as exc:
        profiles_from_records(records)
    problems = exc.value.problems
    assert any('A' in p and 'pk_bytes' in p for p in problems)
    assert any('B' in p and 'mode' in p for p in problems)
    assert any('C' in p and 'classical' in p for p in problems)


def test_profiles_from_records_derives_sign_mean_and_default_cv():
    profile = profiles_from_records([_record()], default_cv=0.3)[0]
    assert profile.service_mean_us == pytest.approx(2 * 0.001 / 13.5 * 1e6)
    assert profile.sign_mean_us == pytest.approx(profile.service_mean_us)
    assert profile.sign_cv == 0.3


def test_ecdsa_sec1_encoding_adds_one_byte():
    records = [_record(name='ECDSA-P256', mode='classical', pk_bytes=64, sig_bytes=72)]
    assert profiles_from_records(records, ecdsa_sec1=True)[0].pk_bytes == 65
    assert profiles_from_records(records, ecdsa_sec1=False)[0].pk_bytes == 64


def test_empirical_stat_lognormal_and_validation():
    stat = EmpiricalStat(mean_us=279_330.0, std_us=7_618.0)
    mean, std = lognormal_moments(stat.lognormal())
    assert mean == pytest.approx(279_330.0)
    assert std == pytest.approx(7_618.0)
    with pytest.raises(DomainError):
        EmpiricalStat(mean_us=10.0, std_us=1.0, min_us=20.0)


def test_published_stats_fill_in_missing_sign_cv():
    assert profile_map()['SPHINCS+-SHA2-128s'].sign_cv == pytest.approx(7_618.0 / 279_330.0)
    assert empirical_stats()['SPHINCS+-SHA2-128s'].cv == pytest.approx(0.02727, abs=1e-5)
    published = {'TestSig': {'mean_us': 100.0, 'std_us': 40.0}}
    assert profiles_from_records([_record()], default_cv=0.3, empirical=published)[0].sign_cv == pytest.approx(0.4)
    # 记录自带的 sign_cv 优先
    assert profiles_from_records([_record(sign_cv=0.1)], empirical=published)[0].sign_cv == 0.1
    assert profiles_from_records([_record()], default_cv=0.3, empirical={})[0].sign_cv == 0.3
    with pytest.raises(DomainError):
        profiles_from_records([_record()], empirical={'TestSig': {'mean_us': 0.0, 'std_us': 1.0}})
