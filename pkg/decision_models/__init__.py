from .cdi import CdiRecord, cdi, cdi_table
from .costs import MigrationPhase, migration_cost_table, migration_frame, phase1_breakdown, sla_headroom
from .formats import FORMAT_LIMITS, FormatVerdict, format_compliance, format_matrix
from .hndl import (HndlRow, HndlSummary, exposure_status, hndl_exposure, hndl_frame, hndl_summary, projected_volume,
                   storage_cost, volume_projection)
from .routes import RouteResult, RouteSpec, becs_amortised, route_p99, route_sign_p99, route_specs, route_table
