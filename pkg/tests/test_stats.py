import math

import numpy as np
import pytest
from scipy import stats as sps

from common.errors import DomainError, FitError
from latency_db.lognormal import LogNormalParams
from stats import (ad_test_log_normality, aic_bic_compare, anova_eta2, anova_factor, block_maxima, bootstrap_ci,
                   classify_tail, cohens_d, daily_maxima_report, effect_size, fit_gev_mle, fit_lognormal_mle,
                   gev_quantile, gev_report, gof_report, ks_test_lognormal, magnitude_label, mann_whitney_u)
from stats.gev import GevFit


def _gev_sample(xi=0.1, loc=40.0, scale=2.0, n=2000, seed=5):
    return sps.genextreme.rvs(c=-xi, loc=loc, scale=scale, size=n, random_state=np.random.default_rng(seed))


def _lognormal_sample(n=2000, seed=1, mu=3.7, sigma=0.3):
    return np.random.default_rng(seed).lognormal(mu, sigma, n)


def test_block_maxima_drops_partial_block():
    got = block_maxima(np.arange(105.0), block_size=50)
    assert list(got) == [49.0, 99.0]
    with pytest.raises(DomainError):
        block_maxima(np.arange(60.0), block_size=50)


def test_fit_gev_recovers_parameters():
    fit = fit_gev_mle(_gev_sample())
    assert fit.xi == pytest.approx(0.1, abs=0.05)
    assert fit.loc == pytest.approx(40.0, abs=0.3)
    assert fit.scale == pytest.approx(2.0, abs=0.2)
    assert fit.n_blocks == 2000


def test_fit_gev_on_gumbel_sample_classifies_gumbel():
    x = sps.gumbel_r.rvs(loc=40.0, scale=2.0, size=5000, random_state=np.random.default_rng(8))
    assert classify_tail(fit_gev_mle(x).xi) == 'Gumbel'


def test_fit_gev_degenerate_inputs():
    with pytest.raises(FitError):
        fit_gev_mle(np.full(50, 3.0))
    with pytest.raises(DomainError):
        fit_gev_mle(np.arange(10.0))


def test_gev_quantile_matches_scipy_and_gumbel_limit():
    fit = GevFit(xi=0.15, loc=40.0, scale=2.0, n_blocks=100)
    assert gev_quantile(fit, 0.999) == pytest.approx(fit.frozen().ppf(0.999))
    gumbel = GevFit(xi=0.0, loc=0.0, scale=1.0, n_blocks=100)
    assert gev_quantile(gumbel, 0.99) == pytest.approx(-math.log(-math.log(0.99)))
    with pytest.raises(DomainError):
        gev_quantile(fit, 1.0)


def test_classify_tail_thresholds():
    assert classify_tail(0.2) == 'Frechet'
    assert classify_tail(0.01) == 'Gumbel'
    assert classify_tail(-0.2) == 'Weibull'


def test_bootstrap_ci_brackets_point_estimate():
    x = _gev_sample(n=300)
    fit = fit_gev_mle(x)
    lo, hi = bootstrap_ci(x, 0.99, n_resamples=100, rng=np.random.default_rng(2))
    assert lo <= gev_quantile(fit, 0.99) <= hi
    assert bootstrap_ci(np.full(30, 7.0), 0.99) == (7.0, 7.0)


def test_gev_report_fields():
    report = gev_report(_gev_sample(n=200), n_resamples=50, rng=np.random.default_rng(4))
    assert report.q99 < report.q999 < report.q9999
    assert report.ci999[0] <= report.ci999[1]
    assert report.indicative
    assert report.mode == 'block'
    assert report.n_resamples == 50


def test_daily_maxima_report_needs_twenty_days():
    assert daily_maxima_report(_gev_sample(n=10)) is None
    report = daily_maxima_report(_gev_sample(n=60), n_resamples=30, rng=np.random.default_rng(1))
    assert report.mode == 'daily'
    assert not report.indicative


def test_lognormal_mle_and_ks_non_rejection():
    x = _lognormal_sample()
    params = fit_lognormal_mle(x)
    assert params.mu_ln == pytest.approx(3.7, abs=0.02)
    assert params.sigma_ln == pytest.approx(0.3, abs=0.02)
    _, p = ks_test_lognormal(x)
    assert p > 0.05


def test_ks_rejects_uniform_sample():
    x = np.random.default_rng(3).uniform(1.0, 2.0, 20_000)
    _, p = ks_test_lognormal(x)
    assert p < 0.01


def _null_rejection_rate(reject, reps=1000, n=1000, seed=2024):
    rng = np.random.default_rng(seed)
    return sum(bool(reject(rng.lognormal(3.7, 0.3, n))) for _ in range(reps)) / reps


def test_ks_null_calibration_against_tested_lognormal():
    tested = LogNormalParams(mu_ln=3.7, sigma_ln=0.3)
    rate = _null_rejection_rate(lambda x: ks_test_lognormal(x, tested)[1] < 0.05)
    assert 0.03 <= rate <= 0.07


def test_ad_null_calibration():
    rate = _null_rejection_rate(lambda x: ad_test_log_normality(x)[1], n=200)
    assert 0.03 <= rate <= 0.07


def test_ad_rejects_non_lognormal_and_validates_input():
    stat, reject = ad_test_log_normality(np.random.default_rng(3).uniform(1.0, 2.0, 5000))
    assert reject and stat > 0.787
    with pytest.raises(DomainError):
        ad_test_log_normality(np.array([1.0, -1.0] * 10))
    with pytest.raises(DomainError):
        ad_test_log_normality(np.ones(5))


def test_gof_report_combines_tests():
    report = gof_report(_lognormal_sample())
    assert report.n == 2000
    assert not report.reject_ks
    assert report.ad_critical_5pct == 0.787


def test_aic_prefers_lognormal_on_lognormal_data():
    comparison = aic_bic_compare(_lognormal_sample(n=3000, sigma=0.8))
    assert comparison.best.name == 'lognormal'
    assert comparison.by_name('lognormal').delta_aic == 0.0
    assert comparison.by_name('gamma').delta_aic > 10
    assert comparison.by_name('weibull').delta_aic > 10
    assert all(c.available for c in comparison.candidates)


def test_aic_rejects_bad_input():
    with pytest.raises(DomainError):
        aic_bic_compare(_lognormal_sample(n=10))
    with pytest.raises(DomainError):
        aic_bic_compare(_lognormal_sample(n=100), candidates=('lognormal', 'pareto'))


@pytest.mark.parametrize("d,label", [(0.1, 'Negligible'), (0.3, 'Small'), (0.6, 'Medium'), (1.0, 'Large'),
                                     (1.5, 'Very Large'), (3.0, 'Huge'), (-3.0, 'Huge'), (2000.0, 'Off-scale'),
                                     (math.inf, 'Off-scale')])
def test_magnitude_labels(d, label):
    assert magnitude_label(d) == label


def test_cohens_d_pooled_standard_deviation():
    e = cohens_d([1.0, 2.0, 3.0], [0.0, 1.0, 2.0])
    assert e.cohens_d == pytest.approx(1.0)
    assert e.magnitude == 'Large'
    assert cohens_d([5.0, 5.0], [5.0, 5.0]).cohens_d == 0.0
    assert cohens_d([6.0, 6.0], [5.0, 5.0]).off_scale
    with pytest.raises(DomainError):
        cohens_d([], [1.0])


def test_mann_whitney_u():
    assert mann_whitney_u([1.0, 1.0, 1.0], [1.0, 1.0]) == (3.0, 1.0)
    rng = np.random.default_rng(0)
    u, p = mann_whitney_u(rng.normal(10, 1, 50), rng.normal(0, 1, 50))
    assert u == 2500.0
    assert p < 0.001


def test_effect_size_combines_d_and_u():
    rng = np.random.default_rng(1)
    e = effect_size(rng.normal(1.0, 1.0, 200), rng.normal(0.0, 1.0, 200))
    assert e.magnitude in ('Large', 'Medium', 'Very Large')
    assert e.mw_p < 0.001


def test_anova_eta2():
    eta2, f = anova_eta2([[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]])
    assert eta2 == pytest.approx(13.5 / 17.5)
    assert f == pytest.approx(13.5)
    eta2, f = anova_eta2([[2.0, 2.0], [2.0, 2.0]])
    assert eta2 == 0.0 and math.isnan(f)
    with pytest.raises(DomainError):
        anova_eta2([[1.0, 2.0]])


def test_anova_factor_groups_by_label_and_drops_singletons():
    values = [1.0, 4.0, 2.0, 5.0, 3.0, 6.0, 9.0]
    labels = ['a', 'b', 'a', 'b', 'a', 'b', 'c']
    eta2, f, k = anova_factor(values, labels)
    assert k == 2
    assert eta2 == pytest.approx(13.5 / 17.5)
    assert f == pytest.approx(13.5)
    with pytest.raises(DomainError):
        anova_factor([1.0, 2.0], ['a'])
    with pytest.raises(DomainError):
        anova_factor([1.0, 2.0, 3.0], ['a', 'a', 'b'])
