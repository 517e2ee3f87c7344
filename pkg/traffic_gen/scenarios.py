from dataclasses import dataclass
from typing import Optional

import numpy as np

import config
from common.errors import ConfigError

SCENARIO_NAMES = ('normal', 'christmas', 'taxtime', 'crash', 'eofy')
MULTI_DAY_FAMILIES = ('christmas', 'crash')


@dataclass(frozen=True)
class ScenarioSpec:
    name: str
    weight: float
    npp_per_day: int
    intrabank_per_day: int
    rtgs_per_day: int
    swift_per_day: int
    multi_day_family: Optional[str] = None

    @property
    def route_volumes(self):
        return {
            'NPP': self.npp_per_day,
            'RTGS': self.rtgs_per_day,
            'SWIFT': self.swift_per_day,
            'INTRABANK': self.intrabank_per_day,
        }


def scenario_problems(records):
    problems = []
    for r in records:
        name = r.get('name', '?')
        if name not in SCENARIO_NAMES:
            problems.append(f"scenario {name}: name must be one of {', '.join(SCENARIO_NAMES)}")
        for key in ('npp_per_day', 'intrabank_per_day', 'rtgs_per_day', 'swift_per_day'):
            if not r.get(key, 0) > 0:
                problems.append(f"scenario {name}: {key} must be positive")
        if r.get('weight', 0) < 0:
            problems.append(f"scenario {name}: weight must be >= 0")
        family = r.get('multi_day_family')
        if family is not None and family not in MULTI_DAY_FAMILIES:
            problems.append(f"scenario {name}: multi_day_family must be christmas, crash or None")
    total = sum(r.get('weight', 0) for r in records)
    if abs(total - 1.0) > 1e-9:
        problems.append(f"scenario weights must sum to 1 (got {total:.6f})")
    return problems


class ScenarioTable:
    """季节场景表：按权重做类别抽样"""

    def __init__(self, scenarios):
        self.scenarios = list(scenarios)
        problems = scenario_problems([s.__dict__ for s in self.scenarios])
        if problems:
            raise ConfigError(problems)
        self.weights = np.array([s.weight for s in self.scenarios], dtype=float)

    def __iter__(self):
        return iter(self.scenarios)

    def by_name(self, name):
        for s in self.scenarios:
            if s.name == name:
                return s
        raise ConfigError(f"unknown scenario '{name}'")

    @property
    def normal(self):
        return self.by_name('normal')

    def sample(self, rng, size=None):
        idx = rng.choice(len(self.scenarios), size=size, p=self.weights)
        if size is None:
            return self.scenarios[int(idx)]
        return [self.scenarios[i] for i in idx]


def default_scenarios(records=None):
    records = config.SCENARIOS if records is None else records
    return ScenarioTable(ScenarioSpec(**r) for r in records)


def sample_scenario(rng, table=None):
    table = default_scenarios() if table is None else table
    return table.sample(rng)
