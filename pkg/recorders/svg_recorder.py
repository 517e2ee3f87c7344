"""
静态 SVG 图表：按表名分派绘图函数，语料 p99 / 合规分布在 finish() 时汇总绘制。
"""
import os

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

from common.errors import SimulationError

from .base_recorder import BaseRecorder

CORPUS_PREFIX = 'corpus_'


def _save(fig, path):
    try:
        fig.savefig(path, format='svg', bbox_inches='tight')
    except OSError as e:
        raise SimulationError(f"failed to write {path}: {e}") from e
    finally:
        plt.close(fig)
    return path


def plot_queue_utilisation(frame):
    fig, ax = plt.subplots(figsize=(10, 5))
    colors = ['tab:red' if s else 'tab:blue' for s in frame['saturated']]
    ax.bar(frame['algo'], frame['rho'], color=colors)
    ax.axhline(1.0, color='black', linestyle='--', linewidth=1, label='ρ = 1')
    ax.set_yscale('log')
    ax.set_ylabel('utilisation ρ')
    ax.set_title('HSM queue utilisation (λ = 13.5 TPS)')
    ax.tick_params(axis='x', rotation=30)
    ax.legend()
    return fig


def plot_tps_sweep(frame):
    fig, ax = plt.subplots(figsize=(10, 5))
    for algo, group in frame.groupby('algo', sort=False):
        ax.plot(group['tps_or_hour'], group['rho'], label=algo)
    ax.axhline(1.0, color='black', linestyle='--', linewidth=1)
    ax.set_yscale('log')
    ax.set_xlabel('arrival rate per institution (TPS)')
    ax.set_ylabel('utilisation ρ')
    ax.set_title('Utilisation vs arrival rate')
    ax.legend(fontsize=8)
    return fig


def plot_hourly_rho(frame):
    fig, ax = plt.subplots(figsize=(10, 5))
    for algo, group in frame.groupby('algo', sort=False):
        ax.step(group['tps_or_hour'], group['rho'], where='mid', label=algo)
    ax.axhline(1.0, color='black', linestyle='--', linewidth=1)
    ax.set_yscale('log')
    ax.set_xlabel('hour of day')
    ax.set_ylabel('utilisation ρ')
    ax.set_xticks(range(0, 24, 2))
    ax.set_title('Hourly utilisation profile')
    ax.legend(fontsize=8)
    return fig


def plot_gev_ladder(frame):
    fig, ax = plt.subplots(figsize=(10, 5))
    for i, col in enumerate(('q99', 'q999', 'q9999')):
        ax.scatter(frame['algo'], frame[col], label=col, marker='o^s'[i])
    ax.set_yscale('log')
    ax.set_ylabel('latency (ms)')
    ax.set_title('GEV extreme quantiles')
    ax.tick_params(axis='x', rotation=30)
    ax.legend()
    return fig


def plot_cost_phases(frame):
    fig, ax = plt.subplots(figsize=(9, 5))
    costs = frame['annual_cost_usd'] / 1e6
    errors = [costs - frame['low_usd'] / 1e6, frame['high_usd'] / 1e6 - costs]
    labels = [f"{p}: {label}" for p, label in zip(frame['phase'], frame['label'])]
    ax.bar(labels, costs, yerr=errors, capsize=4, color='tab:green')
    ax.set_ylabel('annual cost (USD M)')
    ax.set_title('Migration cost by phase')
    ax.tick_params(axis='x', rotation=20)
    return fig


def plot_p99_distributions(corpora):
    fig, ax = plt.subplots(figsize=(11, 5))
    labels = list(corpora)
    ax.violinplot([corpora[k]['p99'].to_numpy() for k in labels], showmedians=True)
    ax.set_xticks(range(1, len(labels) + 1))
    ax.set_xticklabels(labels, rotation=30)
    ax.set_yscale('log')
    ax.set_ylabel('daily p99 (ms)')
    ax.set_title('Daily NPP p99 distribution')
    return fig


def plot_compliance(corpora):
    fig, ax = plt.subplots(figsize=(11, 5))
    labels = list(corpora)
    ax.boxplot([corpora[k]['compliance'].to_numpy() * 100 for k in labels])
    ax.set_xticks(range(1, len(labels) + 1))
    ax.set_xticklabels(labels, rotation=30)
    ax.set_ylabel('daily SLA compliance (%)')
    ax.set_ylim(-5, 105)
    ax.set_title('Daily SLA compliance distribution')
    return fig


# 表名 -> (文件名, 绘图函数)
TABLE_PLOTS = {
    'queue': ('queue_utilisation', plot_queue_utilisation),
    'tps_sweep': ('tps_sweep', plot_tps_sweep),
    'hourly_rho': ('hourly_rho', plot_hourly_rho),
    'gev': ('gev_ladder', plot_gev_ladder),
    'costs': ('cost_phases', plot_cost_phases),
}


class SvgRecorder(BaseRecorder):
    def __init__(self, out_dir):
        super().__init__(out_dir)
        self.corpora = {}

    def write_table(self, name, frame):
        if frame is None or frame.empty:
            return None
        if name.startswith(CORPUS_PREFIX):
            self.corpora[name[len(CORPUS_PREFIX):]] = frame
            return None
        if name not in TABLE_PLOTS:
            return None
        stem, plot = TABLE_PLOTS[name]
        path = _save(plot(frame), os.path.join(self.out_dir, f"{stem}.svg"))
        self.written.append(path)
        return path

    def write_summary(self, summary):
        return None

    def finish(self):
        if self.corpora:
            for stem, plot in (('p99_distributions', plot_p99_distributions), ('compliance', plot_compliance)):
                self.written.append(_save(plot(self.corpora), os.path.join(self.out_dir, f"{stem}.svg")))
        return self.written
