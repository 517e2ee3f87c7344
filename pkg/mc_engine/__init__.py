from .engine import (REGION_COLUMN, CorpusResult, DayResult, RunConfig, build_chains, ci_mean_t, day_scenarios,
                     draw_day, dump_day_frame, percentile, run_corpus, simulate_day, summarize_day)
from .seeding import Purpose, day_rng, day_seed, stream_fingerprint
from .transaction import LatencyEnv, TransactionDraws, default_env, latency_batch, queue_wait_ms, simulate_transaction
