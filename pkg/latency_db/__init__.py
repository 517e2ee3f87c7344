from .lognormal import LogNormalParams, fit_lognormal, lognormal_moments, lognormal_quantile, sample_lognormal
from .profiles import (AlgorithmProfile, EmpiricalStat, builtin_profiles, derive_service_mean_from_rho,
                       empirical_stats, profile_map, profiles_from_records)
