import argparse
import datetime
import os
import sys
from dataclasses import replace

import numpy as np
import pandas as pd

import config
from common import log
from common.errors import ConfigError, DomainError, FitError, SimulationError
from common.formatters import format_headline, slugify
from common.loader import resolve_settings
from decision_models import (cdi_table, format_matrix, hndl_exposure, hndl_frame, hndl_summary, migration_cost_table,
                             migration_frame, phase1_breakdown, route_table, sla_headroom, volume_projection)
from mc_engine import REGION_COLUMN, Purpose, day_rng, dump_day_frame, run_corpus
from queueing import (QueueParams, degraded_compare, dos_metrics, first_saturated_tps, hourly_profile, min_servers,
                      mmc_assess, psa_margin, tps_sweep, wait_quantile)
from recorders import build_recorders, dump_json
from stats import aic_bic_compare, anova_factor, block_maxima, daily_maxima_report, effect_size, gev_report, gof_report

SUBCOMMANDS = ('run', 'analyze', 'report', 'sweep', 'all')
SAMPLES_TABLE = 'samples'


# ==========================
# 语料
# ==========================
def run_mode(settings, run_cfg, recorder, dump_transactions=False):
    log.banner("Running Monte Carlo Corpus")
    corpus = run_corpus(run_cfg)
    for name in corpus.algorithms:
        recorder.write_table(f"corpus_{slugify(name)}", corpus.to_frame(name))
    percentiles = corpus.percentile_table()
    recorder.write_table('percentiles', percentiles)
    recorder.write_table('scenarios', corpus.scenario_table())
    if corpus.samples:
        recorder.write_table(SAMPLES_TABLE, corpus.samples_frame())
    if dump_transactions:
        recorder.write_table('transactions_day0', dump_day_frame(run_cfg, 0))

    for row in percentiles.itertuples():
        delta = f"{row.delta_p99_ms:+.2f}" if row.delta_p99_ms is not None else "n/a"
        log.detail(f"{row.algo:<20} p99 {row.p99_ms:10.2f} ms  Δp99 {delta:>10} ms  "
                   f"compliance {row.sla_compliance:.3%}")
    return corpus


# ==========================
# 统计分析
# ==========================
def _corpus_inputs(corpus):
    daily = {name: corpus.to_frame(name) for name in corpus.algorithms}
    samples = dict(corpus.samples)
    if corpus.sample_regions is not None:
        samples[REGION_COLUMN] = corpus.sample_regions
    return daily, samples


def _load_inputs(input_dir):
    """从一次 run 的输出目录读回逐日结果与分析日样本"""
    daily = {}
    if not os.path.isdir(input_dir):
        raise ConfigError(f"analyze input directory not found: {input_dir}")
    for fname in sorted(os.listdir(input_dir)):
        if fname.startswith('corpus_') and fname.endswith('.csv'):
            frame = pd.read_csv(os.path.join(input_dir, fname))
            daily[str(frame['algo'].iloc[0])] = frame
    if not daily:
        raise ConfigError(f"no corpus_*.csv found in {input_dir}")
    samples = {}
    samples_path = os.path.join(input_dir, f"{SAMPLES_TABLE}.csv")
    if os.path.isfile(samples_path):
        samples = {k: v.to_numpy() for k, v in pd.read_csv(samples_path).items()}
    else:
        log.warning(f"{samples_path} missing: GEV block maxima and goodness-of-fit skipped")
    return daily, samples


def _gev_row(algo, report, mode):
    if report is None:
        return None
    return {
        'algo': algo, 'mode': mode, 'xi': report.fit.xi, 'loc': report.fit.loc, 'scale': report.fit.scale,
        'n_blocks': report.fit.n_blocks, 'q99': report.q99, 'q999': report.q999, 'q9999': report.q9999,
        'ci999_low': report.ci999[0], 'ci999_high': report.ci999[1],
        'ci9999_low': report.ci9999[0], 'ci9999_high': report.ci9999[1],
        'tail_class': report.tail_class, 'indicative': report.indicative,
        'bootstrap_failures': report.bootstrap_failures,
    }


def analyze_mode(settings, daily, samples, recorder):
    log.banner("Running Statistical Analysis")
    baseline = settings['BASELINE_ALGORITHM']
    seed = settings['MASTER_SEED']
    algos = list(daily)

    gev_rows, gof_rows, aic_rows = [], [], []
    for i, algo in enumerate(algos):
        rng = day_rng(seed, i, Purpose.BOOTSTRAP)
        try:
            if algo in samples:
                maxima = block_maxima(samples[algo], settings['GEV_BLOCK_SIZE'])
                gev_rows.append(_gev_row(algo, gev_report(maxima, mode='block', rng=rng), 'block'))
            gev_rows.append(_gev_row(algo, daily_maxima_report(daily[algo]['max'].to_numpy(), rng=rng), 'daily'))
        except (FitError, DomainError) as e:
            log.warning(f"GEV fit skipped for {algo}: {e}")
        if algo not in samples:
            continue
        try:
            g = gof_report(samples[algo])
            gof_rows.append({'algo': algo, **g.__dict__})
            comparison = aic_bic_compare(samples[algo])
            for c in comparison.candidates:
                aic_rows.append({'algo': algo, 'distribution': c.name, 'available': c.available, 'aic': c.aic,
                                 'bic': c.bic, 'delta_aic': c.delta_aic})
        except DomainError as e:
            log.warning(f"goodness of fit skipped for {algo}: {e}")

    effect_rows = []
    if baseline in daily:
        base = daily[baseline]['p99'].to_numpy()
        for algo in algos:
            if algo == baseline:
                continue
            e = effect_size(daily[algo]['p99'].to_numpy(), base)
            effect_rows.append({'algo': algo, 'baseline': baseline, 'cohens_d': e.cohens_d,
                                'magnitude': e.magnitude, 'mw_u': e.mw_u, 'mw_p': e.mw_p})
    else:
        log.warning(f"baseline {baseline} not in corpus: effect sizes skipped")

    saturating = {a for a in algos if daily[a]['compliance'].mean() < 0.5}
    non_saturating = [a for a in algos if a not in saturating]
    anova_rows = []

    def add_anova(factor, label, values, labels):
        try:
            eta2, f_stat, k = anova_factor(values, labels)
        except DomainError as e:
            log.debug(f"ANOVA {factor}/{label} skipped: {e}")
            return
        anova_rows.append({'factor': factor, 'groups': label, 'k': k, 'n': len(values), 'eta2': eta2,
                           'f_stat': f_stat})

    # 算法因子：逐日 p99 按算法分组
    for label, members in (('all', algos), ('non_saturating', non_saturating)):
        if len(members) >= 2:
            add_anova('algorithm', label, np.concatenate([daily[a]['p99'].to_numpy() for a in members]),
                      np.concatenate([[a] * len(daily[a]) for a in members]))

    # 场景因子：逐日 p99 按场景分组，逐算法一行，另加非饱和算法合并一行
    for algo in algos:
        add_anova('scenario', algo, daily[algo]['p99'].to_numpy(), daily[algo]['scenario'].to_numpy())
    if non_saturating:
        add_anova('scenario', 'non_saturating',
                  np.concatenate([daily[a]['p99'].to_numpy() for a in non_saturating]),
                  np.concatenate([daily[a]['scenario'].to_numpy() for a in non_saturating]))

    # 地域因子：分析日单笔时延按发起城市分组
    regions = samples.get(REGION_COLUMN)
    if regions is not None:
        for algo in algos:
            if algo in samples:
                add_anova('region', algo, samples[algo], regions)
    elif samples:
        log.warning("analysis-day samples carry no origin city: region ANOVA skipped")

    tables = {
        'gev': pd.DataFrame([r for r in gev_rows if r is not None]),
        'gof': pd.DataFrame(gof_rows),
        'aic': pd.DataFrame(aic_rows),
        'effects': pd.DataFrame(effect_rows),
        'anova': pd.DataFrame(anova_rows),
    }
    for name, frame in tables.items():
        recorder.write_table(name, frame)
    return tables


# ==========================
# 排队与决策模型
# ==========================
def queue_tables(run_cfg):
    lam = config.ROUTE_LAMBDA_TPS['NPP']
    c = run_cfg.c_servers
    baseline = run_cfg.algorithm(config.BASELINE_ALGORITHM) if any(
        a.name == config.BASELINE_ALGORITHM for a in run_cfg.algorithms) else None
    queue_rows, dos_rows = [], []
    for algo in run_cfg.algorithms:
        params = QueueParams(lam, algo.mu_ops, c)
        a = mmc_assess(params)
        p95 = wait_quantile(params, 0.95) / 1000.0
        queue_rows.append({
            'algo': algo.name, 'lambda_tps': lam, 'c': c, 'rho': a.rho, 'erlang_c': a.erlang_c,
            'wait_ms': a.mean_wait_ms, 'wait_p95_ms': p95, 'saturated': a.saturated,
            'saturation_tps': c * algo.mu_ops, 'psa_margin': psa_margin(algo.mu_ops, c),
            'min_servers': min_servers(lam, algo.mu_ops),
            'min_servers_10ms_p95': min_servers(lam, algo.mu_ops, criterion='wait_below', wait_below_ms=10.0),
        })
        if a.saturated:
            base_params = QueueParams(lam, baseline.mu_ops, c) if baseline else None
            d = dos_metrics(lam, algo.mu_ops, c, config.DOS_DURATION_S, baseline=base_params)
            dos_rows.append({'algo': algo.name, 'duration_s': config.DOS_DURATION_S, **d.__dict__})
    return pd.DataFrame(queue_rows), pd.DataFrame(dos_rows)


def hourly_table(run_cfg, scenario_name='christmas'):
    scenario = run_cfg.scenarios.by_name(scenario_name)
    frames = []
    for algo in run_cfg.algorithms:
        profile = hourly_profile(algo, scenario, c=run_cfg.c_servers, profile=run_cfg.intraday)
        frames.append(profile.to_frame())
        if profile.saturated_hours:
            log.detail(f"{algo.name}: {profile.saturated_hours} of 24 {scenario_name} hours saturated "
                       f"(peak ρ {profile.peak_rho:.2f} at {profile.peak_hour:02d}:00)")
    return pd.concat(frames, ignore_index=True)


def _p99_inputs(run_cfg, corpus):
    """CDI 输入：有语料用实测值，否则用公布的参考值"""
    baseline = config.BASELINE_ALGORITHM
    rows = []
    for algo in run_cfg.algorithms:
        if corpus is not None and baseline in corpus.days:
            rows.append((algo.name, corpus.delta_p99(algo.name), corpus.mean_daily_p99(algo.name)))
        else:
            delta = algo.delta_p99_ref_ms or 0.0
            rows.append((algo.name, delta, config.REFERENCE_BASELINE_P99_MS + delta))
    return rows


def report_mode(settings, run_cfg, recorder, corpus=None):
    log.banner("Running Decision Models")
    p99_inputs = _p99_inputs(run_cfg, corpus)
    cdi_rows = cdi_table(p99_inputs)
    recorder.write_table('cdi', pd.DataFrame([r.__dict__ for r in cdi_rows]))

    recorder.write_table('formats', pd.DataFrame([v.__dict__ for v in format_matrix(run_cfg.algorithms)]))

    measured = {algo: delta for algo, delta, _ in p99_inputs} if corpus is not None else None
    routes = route_table(list(run_cfg.algorithms), npp_deltas=measured, c=run_cfg.c_servers)
    recorder.write_table('routes', routes)

    rows = hndl_exposure()
    recorder.write_table('hndl', hndl_frame(rows))
    hndl = hndl_summary(rows)
    log.detail(f"HNDL cumulative exposed records: {hndl.cumulative_exposed:,} "
               f"(storage ${hndl.storage_usd_per_year[0]:.1f}-${hndl.storage_usd_per_year[-1]:.1f}/yr)")

    phases = migration_cost_table()
    recorder.write_table('costs', migration_frame(phases))
    split = phase1_breakdown()
    recorder.write_table('costs_phase1', pd.DataFrame([split]))

    queue, dos = queue_tables(run_cfg)
    recorder.write_table('queue', queue)
    recorder.write_table('dos', dos)
    recorder.write_table('hourly_rho', hourly_table(run_cfg))

    degraded_rows = []
    for (algo_name, delta, p99), algo in zip(p99_inputs, run_cfg.algorithms):
        normal_wait = mmc_assess(QueueParams(config.ROUTE_LAMBDA_TPS['NPP'], algo.mu_ops, run_cfg.c_servers))
        base = p99 - (0.0 if normal_wait.saturated else normal_wait.mean_wait_ms)
        d = degraded_compare(algo, base, c_normal=run_cfg.c_servers, c_degraded=max(1, run_cfg.c_servers - 1))
        degraded_rows.append({**d.__dict__, 'delta_ms': d.delta})
    recorder.write_table('degraded', pd.DataFrame(degraded_rows))

    return {
        'cdi': {r.algo: r.cdi for r in cdi_rows},
        'hndl_cumulative': hndl.cumulative_exposed,
        'hndl_expected': hndl.expected_exposed,
        'storage_usd_per_year': list(hndl.storage_usd_per_year),
        'phase1_usd': split['total_usd'],
        'saturated_algorithms': [r['algo'] for r in queue.to_dict('records') if r['saturated']],
    }


# ==========================
# 扫描与补充研究
# ==========================
def sweep_mode(settings, run_cfg, recorder, seeds=None, study_days=None):
    log.banner("Running TPS Sweep")
    sweep = tps_sweep(run_cfg.algorithms, c=run_cfg.c_servers)
    recorder.write_table('tps_sweep', sweep)
    for algo in run_cfg.algorithms:
        crossing = first_saturated_tps(sweep, algo.name)
        if crossing is not None:
            log.detail(f"{algo.name} saturates at {crossing:.1f} TPS")
    if seeds:
        study_cfg = replace(run_cfg, n_days=study_days) if study_days else run_cfg
        recorder.write_table('seed_study', seed_study(study_cfg, seeds))
    return sweep


def seed_study(run_cfg, seeds):
    """多种子重跑，逐算法汇总平均日 p99 的跨种子变异系数"""
    per_seed = {}
    for seed in seeds:
        log.info(f"seed study: seed {seed}")
        corpus = run_corpus(replace(run_cfg, master_seed=int(seed)))
        per_seed[seed] = {name: corpus.mean_daily_p99(name) for name in corpus.algorithms}
    rows = []
    for algo in run_cfg.algorithms:
        values = np.array([per_seed[s][algo.name] for s in seeds])
        row = {'algo': algo.name}
        row.update({f"p99_seed{s}_ms": v for s, v in zip(seeds, values)})
        std = float(values.std(ddof=1)) if values.size > 1 else 0.0
        row.update({'mean_p99_ms': float(values.mean()), 'std_ms': std, 'cv': std / float(values.mean())})
        rows.append(row)
    return pd.DataFrame(rows)


def hsm_tier_table(run_cfg, days):
    rows = []
    for tier, overhead in config.HSM_OVERHEAD_PER_HOP_MS.items():
        log.info(f"HSM tier study: {tier} (+{overhead} ms/hop)")
        corpus = run_corpus(replace(run_cfg, hsm_overhead_per_hop_ms=overhead, n_days=days))
        for name in corpus.algorithms:
            rows.append({'tier': tier, 'overhead_per_hop_ms': overhead, 'algo': name,
                         'p99_ms': corpus.mean_daily_p99(name), 'compliance': corpus.compliance(name)})
    return pd.DataFrame(rows)


def growth_table(run_cfg, days):
    rows = []
    projection = volume_projection()
    base = projection[min(projection)]
    for year, tx in projection.items():
        scale = tx / base
        log.info(f"growth study: {year} ({tx:,} tx/day, x{scale:.3f})")
        corpus = run_corpus(replace(run_cfg, npp_volume_scale=scale, n_days=days))
        for name in corpus.algorithms:
            p99 = corpus.mean_daily_p99(name)
            rows.append({'year': year, 'tx_per_day': tx, 'algo': name, 'p99_ms': p99,
                         'headroom_ms': sla_headroom(p99, run_cfg.sla_ms['NPP']),
                         'compliance': corpus.compliance(name)})
    return pd.DataFrame(rows)


# ==========================
# 入口
# ==========================
def _summary(corpus, decisions):
    summary = {'generated_at': datetime.datetime.now().isoformat(timespec='seconds')}
    if corpus is not None:
        baseline = config.BASELINE_ALGORITHM
        summary.update({
            'master_seed': corpus.cfg.master_seed,
            'n_days': corpus.cfg.n_days,
            'n_sample': corpus.cfg.n_sample,
            'mean_p99_ms': {n: corpus.mean_daily_p99(n) for n in corpus.algorithms},
            'ci95_p99_ms': {n: list(corpus.ci95(n)) for n in corpus.algorithms},
            'delta_p99_ms': {n: corpus.delta_p99(n) for n in corpus.algorithms},
            'compliance': {n: corpus.compliance(n) for n in corpus.algorithms},
            'violations': {n: corpus.violations(n) for n in corpus.algorithms},
        })
        if baseline in corpus.days:
            deltas = [v for v in summary['delta_p99_ms'].values() if v is not None]
            summary['baseline_p99_ms'] = corpus.mean_daily_p99(baseline)
            summary['max_delta_p99_ms'] = max(deltas) if deltas else None
        summary['min_compliance'] = min(summary['compliance'].values())
    if decisions:
        summary.update(decisions)
    return summary


def make_output_dir(root, seed):
    stamp = datetime.datetime.now().strftime('%Y%m%d-%H%M%S')
    path = os.path.join(root, f"{stamp}-seed{seed}")
    try:
        os.makedirs(path, exist_ok=True)
    except OSError as e:
        raise SimulationError(f"cannot create output directory {path}: {e}") from e
    return path


def _parse_list(text, cast=str):
    if not text:
        return None
    return [cast(item.strip()) for item in text.split(',') if item.strip()]


def build_parser():
    parser = argparse.ArgumentParser(
        description="后量子签名 NPP / RITS / SWIFT 延迟 Monte Carlo 模拟器",
        formatter_class=argparse.RawTextHelpFormatter
    )
    parser.add_argument('command', choices=SUBCOMMANDS,
                        help="run=语料模拟, analyze=统计分析, report=决策模型, sweep=TPS 扫描/多种子, all=全部")
    parser.add_argument('--seed', type=int, default=None, help="主随机种子 (默认 config.MASTER_SEED)")
    parser.add_argument('--days', type=int, default=None, help="模拟天数")
    parser.add_argument('--sample', type=int, default=None, help="每日抽样交易数")
    parser.add_argument('--algos', type=str, default=None,
                        help="逗号分隔的算法名，例如 'Falcon-512,ML-DSA-65'；基准算法总会包含在内")
    parser.add_argument('--scenario', type=str, default=None, help="固定场景，例如 christmas")
    parser.add_argument('--hsm', choices=tuple(config.HSM_OVERHEAD_PER_HOP_MS), default=None, help="HSM 部署档位")
    parser.add_argument('--servers', type=int, default=None, help="每个 HSM 集群的签名服务器数 c")
    parser.add_argument('--out', type=str, default=None, help="输出根目录")
    parser.add_argument('--plots', action='store_true', help="生成 SVG 图表")
    parser.add_argument('--format', choices=('csv', 'json', 'both'), default=None, help="表格输出格式")
    parser.add_argument('--n_jobs', type=int, default=None,
                        help="并行核心数: >0=指定worker数, -1=自动保留15%%且至少2核, <-1=保留(abs(n_jobs)-1)核")
    parser.add_argument('--config', type=str, default=None,
                        help="覆盖配置：文件路径 (JSON / Python 字典)，或字典字面量\n"
                             "例如: \"{'N_DAYS': 100, 'C_SERVERS': 4}\"")
    parser.add_argument('--input', type=str, default=None, help="analyze: 读取某次 run 的输出目录")
    parser.add_argument('--seeds', type=str, default=None, help="sweep / all: 逗号分隔的种子列表，做跨种子稳定性研究（all 缺省用 SEED_STUDY_SEEDS）")
    parser.add_argument('--study-days', type=int, default=None, help="all: HSM 档位表与增长表的重跑天数")
    parser.add_argument('--dump-transactions', action='store_true', help="run: 导出第 0 日交易流")
    return parser


def _resolve(args, environ=None):
    cli = {
        'MASTER_SEED': args.seed,
        'N_DAYS': args.days,
        'N_SAMPLE': args.sample,
        'SCENARIO_OVERRIDE': args.scenario,
        'HSM_TIER': args.hsm,
        'C_SERVERS': args.servers,
        'OUTPUT_PATH': args.out,
        'OUTPUT_FORMAT': args.format,
        'N_JOBS': args.n_jobs,
        'STUDY_DAYS': args.study_days,
        'PLOTS': True if args.plots else None,
    }
    config_path, literal = None, None
    if args.config:
        if os.path.isfile(args.config):
            config_path = args.config
        else:
            literal = args.config
    return resolve_settings(config_path=config_path, cli_overrides=cli, literal=literal, environ=environ)


def execute(args, environ=None):
    settings = _resolve(args, environ)
    run_cfg = settings.build_run_config(_parse_list(args.algos))
    out_dir = make_output_dir(settings['OUTPUT_PATH'], settings['MASTER_SEED'])
    log.info(f"Output directory: {out_dir}")
    dump_json(os.path.join(out_dir, 'config_snapshot.json'),
              {'command': args.command, 'argv': sys.argv[1:], 'settings': settings.echo()})

    recorder = build_recorders(out_dir, fmt=settings['OUTPUT_FORMAT'], plots=settings['PLOTS'])
    corpus, decisions = None, {}

    if args.command in ('run', 'all'):
        corpus = run_mode(settings, run_cfg, recorder, dump_transactions=args.dump_transactions)
    if args.command == 'analyze':
        if args.input:
            daily, samples = _load_inputs(args.input)
        else:
            daily, samples = _corpus_inputs(run_mode(settings, run_cfg, recorder))
        analyze_mode(settings, daily, samples, recorder)
    if args.command == 'all':
        analyze_mode(settings, *_corpus_inputs(corpus), recorder)
    if args.command in ('report', 'all'):
        decisions = report_mode(settings, run_cfg, recorder, corpus)
    if args.command == 'sweep':
        sweep_mode(settings, run_cfg, recorder, seeds=_parse_list(args.seeds, int))
    if args.command == 'all':
        # all 总会做种子研究，未给 --seeds 时用配置里的种子，天数与 HSM / 增长研究一致
        seeds = _parse_list(args.seeds, int) or settings['SEED_STUDY_SEEDS']
        sweep_mode(settings, run_cfg, recorder, seeds=seeds, study_days=settings['STUDY_DAYS'])
    if args.command == 'all':
        log.banner("Running HSM Tier And Growth Studies")
        recorder.write_table('hsm_tiers', hsm_tier_table(run_cfg, settings['STUDY_DAYS']))
        recorder.write_table('growth', growth_table(run_cfg, settings['STUDY_DAYS']))

    summary = _summary(corpus, decisions)
    recorder.write_summary(summary)
    written = recorder.finish()
    log.banner("Finished")
    for key, value in format_headline(summary).items():
        log.detail(f"{key}: {value}")
    log.detail(f"{len(written)} files written to {out_dir}")
    return out_dir


def main(argv=None, environ=None):
    args = build_parser().parse_args(argv)
    try:
        execute(args, environ)
    except ConfigError as e:
        log.error(str(e))
        return 2
    except (SimulationError, OSError) as e:
        log.error(str(e))
        return 3
    return 0


if __name__ == '__main__':
    sys.exit(main())
