from dataclasses import replace

import numpy as np
import pandas as pd
import pytest

import config
from common.errors import ConfigError, DomainError
from latency_db import profile_map
from mc_engine import (REGION_COLUMN, Purpose, RunConfig, build_chains, ci_mean_t, day_rng, day_scenarios, day_seed,
                       default_env, dump_day_frame, percentile, run_corpus, simulate_day, simulate_transaction,
                       stream_fingerprint, summarize_day)
from network_model import Ar1State, default_institutions
from traffic_gen import default_scenarios
from traffic_gen.generator import Transaction


def _build_cfg(**overrides):
    base = {'master_seed': 42, 'n_days': 6, 'n_sample': 400, 'n_jobs': 1}
    base.update(overrides)
    return RunConfig(**base)


def test_day_streams_are_distinct_and_reproducible():
    a = stream_fingerprint(day_seed(42, 3, Purpose.SIGN))
    assert a == stream_fingerprint(day_seed(42, 3, Purpose.SIGN))
    assert a != stream_fingerprint(day_seed(42, 3, Purpose.NETWORK))
    assert a != stream_fingerprint(day_seed(42, 4, Purpose.SIGN))
    assert a != stream_fingerprint(day_seed(43, 3, Purpose.SIGN))
    with pytest.raises(ValueError):
        day_seed(42, -1, Purpose.SIGN)
    assert day_rng(42, 0, Purpose.AR1).random() == day_rng(42, 0, Purpose.AR1).random()


def test_percentile_and_t_interval():
    assert percentile([1, 2, 3, 4], 0.5) == 2.5
    assert percentile([7.0], 0.99) == 7.0
    with pytest.raises(DomainError):
        percentile([], 0.5)
    lo, hi = ci_mean_t([1.0, 2.0, 3.0])
    assert (lo + hi) / 2 == pytest.approx(2.0)
    assert hi - lo == pytest.approx(2 * 4.302653 / np.sqrt(3), rel=1e-5)
    with pytest.raises(DomainError):
        ci_mean_t([1.0])


def test_summarize_day_counts_sla_compliance():
    day = summarize_day(0, 'normal', [10.0, 20.0, 3000.0, 40.0], 2000.0)
    assert day.sla_compliance == 0.75
    assert day.n == 4
    assert day.max_ms == 3000.0


def test_run_config_validation_collects_problems():
    with pytest.raises(ConfigError) as exc:
        _build_cfg(n_days=0, n_sample=0, c_servers=0)
    assert len(exc.value.problems) == 3
    with pytest.raises(ConfigError):
        _build_cfg(scenario_override='easter')


def test_build_chains_groups_consecutive_family_days():
    table = default_scenarios()
    seq = [table.by_name(n) for n in ('normal', 'christmas', 'christmas', 'crash', 'crash', 'christmas', 'normal',
                                       'normal')]
    assert build_chains(seq) == [[0], [1, 2], [3, 4], [5], [6], [7]]


def test_day_scenarios_override_and_determinism():
    cfg = _build_cfg(n_days=20)
    assert [s.name for s in day_scenarios(cfg)] == [s.name for s in day_scenarios(cfg)]
    forced = _build_cfg(n_days=5, scenario_override='crash')
    assert {s.name for s in day_scenarios(forced)} == {'crash'}


def test_corpus_is_identical_across_worker_counts():
    serial = run_corpus(_build_cfg(n_days=8, n_jobs=1))
    parallel = run_corpus(_build_cfg(n_days=8, n_jobs=2))
    pd.testing.assert_frame_equal(serial.percentile_table(), parallel.percentile_table())
    for name in serial.algorithms:
        pd.testing.assert_frame_equal(serial.to_frame(name), parallel.to_frame(name))


def test_corpus_orders_algorithms_and_flags_sphincs():
    corpus = run_corpus(_build_cfg(n_days=3, n_sample=3000))
    assert [d.day_index for d in corpus.days['ECDSA-P256']] == [0, 1, 2]
    assert corpus.mean_daily_p99('ECDSA-P256') < corpus.mean_daily_p99('ML-DSA-65')
    assert corpus.mean_daily_p99('ML-DSA-65') < corpus.mean_daily_p99('SPHINCS+-SHA2-128s')
    assert corpus.compliance('ECDSA-P256') == 1.0
    assert corpus.compliance('SPHINCS+-SHA2-128s') == 0.0
    assert corpus.violations('SPHINCS+-SHA2-128s') == sum(d.n for d in corpus.days['SPHINCS+-SHA2-128s'])
    assert corpus.delta_p99('ECDSA-P256') == 0.0
    # 分析日样本只保留一天，且各算法等长
    lengths = {len(v) for v in corpus.samples.values()}
    assert len(lengths) == 1


def test_corpus_with_single_transaction_per_day():
    corpus = run_corpus(_build_cfg(n_days=2, n_sample=1))
    day = corpus.days['Falcon-512'][0]
    assert day.n == 1
    assert day.p50_ms == day.p99_ms == day.max_ms


def test_algorithm_filter_keeps_common_random_numbers():
    full = run_corpus(_build_cfg(n_days=3))
    only = run_corpus(_build_cfg(n_days=3), algo_names=['ECDSA-P256', 'Falcon-512'])
    assert only.algorithms == ['ECDSA-P256', 'Falcon-512']
    assert only.mean_daily_p99('Falcon-512') == full.mean_daily_p99('Falcon-512')


def test_simulate_day_replays_chain_state():
    cfg = _build_cfg(n_days=4, scenario_override='christmas')
    corpus = run_corpus(cfg)
    algo = cfg.algorithm('ML-DSA-44')
    assert simulate_day(3, algo, cfg) == corpus.days['ML-DSA-44'][3]
    with pytest.raises(DomainError):
        simulate_day(4, algo, cfg)


def test_hsm_overhead_adds_per_hop_cost():
    base = run_corpus(_build_cfg(n_days=2))
    network = run_corpus(replace(_build_cfg(n_days=2), hsm_overhead_per_hop_ms=2.0))
    # 4 个签名 hop × 2 ms，公共随机数下 p99 平移 8 ms
    shift = network.mean_daily_p99('ECDSA-P256') - base.mean_daily_p99('ECDSA-P256')
    assert shift == pytest.approx(8.0, abs=1e-6)


def test_dump_day_frame_has_latency_per_algorithm():
    cfg = _build_cfg(n_days=1, n_sample=50)
    frame = dump_day_frame(cfg)
    assert len(frame) == 50
    assert 'latency_ms[ECDSA-P256]' in frame.columns
    assert (frame['latency_ms[SPHINCS+-SHA2-128s]'] > frame['latency_ms[ECDSA-P256]']).all()


def test_simulate_transaction_single_path():
    insts = default_institutions()
    tx = Transaction(id=0, route='NPP', origin=insts[0], dest=insts[1], hour=10.0, amount=100.0,
                     needs_payid=True, tls_reconnect=False)
    profiles = profile_map()
    env = default_env()
    fast = simulate_transaction(tx, profiles['ECDSA-P256'], env, np.random.default_rng(1), Ar1State())
    slow = simulate_transaction(tx, profiles['SPHINCS+-SHA2-128s'], env, np.random.default_rng(1), Ar1State())
    assert 0 < fast < 2000.0
    assert slow > 10_000.0


def test_analysis_day_samples_carry_origin_city():
    corpus = run_corpus(_build_cfg(n_days=2, n_sample=3000))
    frame = corpus.samples_frame()
    assert list(frame.columns) == corpus.algorithms + [REGION_COLUMN]
    assert set(frame[REGION_COLUMN]) <= {'SYD', 'MEL', 'BNE'}
    p99 = corpus.region_p99('ECDSA-P256')
    # 两段 9.2 ms 单程对两段 0.8 ms
    assert p99['MEL'] > p99['SYD'] + 10.0


def test_gateway_rule_only_moves_destination_legs():
    origin = run_corpus(_build_cfg(n_days=1, n_sample=2000))
    registered = run_corpus(_build_cfg(n_days=1, n_sample=2000, gateway='registered'))
    mel = origin.sample_regions == 'MEL'
    assert np.array_equal(origin.sample_regions, registered.sample_regions)
    assert registered.samples['ECDSA-P256'][mel].mean() < origin.samples['ECDSA-P256'][mel].mean()
    with pytest.raises(ConfigError):
        _build_cfg(gateway='nearest')


def test_run_config_reads_ar1_settings_at_construction(monkeypatch):
    monkeypatch.setattr(config, 'AR1_SIGMA_EPS', 0.5)
    monkeypatch.setattr(config, 'AR1_ALPHA', 0.6)
    ar1 = RunConfig(n_days=1, n_sample=10).ar1
    assert (ar1.alpha, ar1.sigma_eps, ar1.sigma_ar) == (0.6, 0.5, config.AR1_SIGMA_AR)
