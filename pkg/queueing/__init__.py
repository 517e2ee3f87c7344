from .analysis import (DegradedComparison, DosMetrics, HourlyProfile, degraded_compare, dos_metrics, first_saturated_tps,
                       hourly_profile, route_arrival_rate, tps_sweep)
from .erlang import (QueueAssessment, QueueParams, erlang_b, erlang_c, min_servers, mmc_assess, psa_margin,
                     saturation_boundary, wait_quantile)
