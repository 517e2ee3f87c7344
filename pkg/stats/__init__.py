from .effects import EffectSize, anova_eta2, anova_factor, cohens_d, effect_size, magnitude_label, mann_whitney_u
from .gev import (GevFit, GevReport, block_maxima, bootstrap_ci, classify_tail, daily_maxima_report, fit_gev_mle,
                  gev_quantile, gev_report)
from .gof import (CandidateFit, GofReport, ModelComparison, aic_bic_compare, ad_test_log_normality, fit_lognormal_mle,
                  gof_report, ks_test_lognormal)
