"""
Full-size corpus checks (1000 days x 10000 transactions, default seed).
Run with `pytest --runslow`; the module fixture builds the corpus once.
"""
from dataclasses import replace

import numpy as np
import pytest

import config
from latency_db import builtin_profiles
from mc_engine import Purpose, RunConfig, day_rng, run_corpus
from queueing import degraded_compare
from run import seed_study
from stats import (ad_test_log_normality, aic_bic_compare, anova_factor, block_maxima, effect_size, gev_report,
                   ks_test_lognormal)

pytestmark = pytest.mark.slow

SPHINCS = 'SPHINCS+-SHA2-128s'
ORDERED = ['ECDSA-P256', 'Falcon-512', 'ML-DSA-44', 'Falcon-1024', 'ML-DSA-65', 'ML-DSA-87', 'ML-DSA-65 Hybrid']
REFERENCE_DELTAS = {'Falcon-512': 0.30, 'ML-DSA-44': 0.62, 'Falcon-1024': 0.90, 'ML-DSA-65': 1.16,
                    'ML-DSA-87': 1.57, 'ML-DSA-65 Hybrid': 1.69}


@pytest.fixture(scope='module')
def corpus():
    return run_corpus(RunConfig(master_seed=42, n_days=1000, n_sample=10_000, n_jobs=-1))


def test_sla_compliance_is_all_or_nothing(corpus):
    for name in ORDERED:
        assert corpus.compliance(name) == 1.0, name
        assert corpus.violations(name) == 0, name
    assert corpus.compliance(SPHINCS) == 0.0


def test_baseline_p99_and_deltas(corpus):
    assert corpus.mean_daily_p99('ECDSA-P256') == pytest.approx(43.4, abs=2.0)
    for name, expected in REFERENCE_DELTAS.items():
        assert corpus.delta_p99(name) == pytest.approx(expected, abs=0.15), name


def test_melbourne_origins_sit_above_sydney(corpus):
    p99 = corpus.region_p99('ECDSA-P256')
    assert p99['MEL'] - p99['SYD'] == pytest.approx(16.7, abs=1.5)


def test_p99_ordering(corpus):
    p99 = [corpus.mean_daily_p99(name) for name in ORDERED]
    assert p99 == sorted(p99)
    assert len(set(p99)) == len(p99)


def test_effect_sizes_on_daily_p99(corpus):
    base = corpus.daily_p99('ECDSA-P256')
    assert 1.3 <= effect_size(corpus.daily_p99('ML-DSA-65'), base).cohens_d <= 1.9
    assert 0.25 <= effect_size(corpus.daily_p99('Falcon-512'), base).cohens_d <= 0.6
    for name in ORDERED[1:] + [SPHINCS]:
        assert effect_size(corpus.daily_p99(name), base).mw_p < 0.001, name


def test_block_maxima_gev_is_well_formed(corpus):
    for i, name in enumerate(ORDERED):
        maxima = block_maxima(corpus.samples[name], config.GEV_BLOCK_SIZE)
        report = gev_report(maxima, rng=day_rng(42, i, Purpose.BOOTSTRAP), n_resamples=200)
        assert report.q99 <= report.q999 <= report.q9999
        assert report.ci999[0] <= report.q999 <= report.ci999[1]
        assert 0.0 <= report.fit.xi <= 0.06, name
        assert report.tail_class == 'Gumbel', name
        assert report.q999 == pytest.approx(132.0, rel=0.15), name


def test_goodness_of_fit(corpus):
    for name in ORDERED:
        samples = corpus.samples[name]
        _, p = ks_test_lognormal(samples)
        assert p >= 0.05, name
        comparison = aic_bic_compare(samples)
        assert comparison.best.name == 'lognormal', name
        assert comparison.by_name('gamma').delta_aic > 10
        assert comparison.by_name('weibull').delta_aic > 10
    for name in ORDERED + [SPHINCS]:
        stat, reject = ad_test_log_normality(corpus.samples[name])
        assert reject and stat > 0.787, name


def test_anova_by_algorithm_and_scenario(corpus):
    values = np.concatenate([corpus.daily_p99(name) for name in ORDERED + [SPHINCS]])
    labels = np.repeat(ORDERED + [SPHINCS], len(corpus.scenarios))
    eta2, _, k = anova_factor(values, labels)
    assert k == len(ORDERED) + 1
    assert eta2 > 0.999
    for name in ORDERED:
        eta2, _, _ = anova_factor(corpus.daily_p99(name), corpus.scenarios)
        assert eta2 < 0.05, name


def test_degraded_mode_only_moves_sphincs():
    for profile in builtin_profiles():
        d = degraded_compare(profile, 100.0)
        if profile.name == SPHINCS:
            assert not d.meaningful
        else:
            assert abs(d.delta) <= 0.1, profile.name


def test_network_attached_hsm_adds_about_8ms():
    base = RunConfig(master_seed=42, n_days=config.STUDY_DAYS, n_sample=10_000, n_jobs=-1,
                     algorithms=tuple(p for p in builtin_profiles() if p.name in ('ECDSA-P256', 'ML-DSA-65')))
    software = run_corpus(base)
    network = run_corpus(replace(base, hsm_overhead_per_hop_ms=config.HSM_OVERHEAD_PER_HOP_MS['network']))
    for name in ('ECDSA-P256', 'ML-DSA-65'):
        shift = network.mean_daily_p99(name) - software.mean_daily_p99(name)
        assert shift == pytest.approx(8.0, abs=1.0)
        assert network.compliance(name) == 1.0


def test_cross_seed_variation_is_small():
    base = RunConfig(master_seed=42, n_days=config.STUDY_DAYS, n_sample=10_000, n_jobs=-1,
                     algorithms=tuple(p for p in builtin_profiles() if p.name in ('ECDSA-P256', 'Falcon-512')))
    table = seed_study(base, config.SEED_STUDY_SEEDS)
    assert np.all(table['cv'] < 0.005)
