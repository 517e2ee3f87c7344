from .generator import (Transaction, TrafficBatch, generate_day, generate_day_batch, payid_latency, reconnect_table,
                        tls_reconnect_overhead)
from .intraday import TimeOfDayProfile, default_profile, institution_daily_volume, intraday_rate, sample_hours
from .scenarios import ScenarioSpec, ScenarioTable, default_scenarios, sample_scenario
