from dataclasses import dataclass

import numpy as np

import config
from common.errors import ConfigError, DomainError
from latency_db.lognormal import fit_lognormal

HOP_LABELS = ('intrabank', 'hub', 'interbank', 'rits', 'swift')
CITIES = ('SYD', 'MEL', 'BNE')


@dataclass(frozen=True)
class HopSpec:
    label: str
    mean_ms: float
    cv: float

    def __post_init__(self):
        if self.label not in HOP_LABELS:
            raise DomainError(f"unknown hop tier '{self.label}'")
        if not self.mean_ms > 0 or self.cv < 0:
            raise DomainError(f"hop {self.label}: mean must be > 0 and cv >= 0")

    @property
    def params(self):
        return fit_lognormal(self.mean_ms, self.mean_ms * self.cv)


@dataclass(frozen=True)
class CityHubLatency:
    city: str
    one_way_ms: float

    def __post_init__(self):
        if self.one_way_ms < 0:
            raise DomainError(f"city {self.city}: one-way latency must be >= 0")


@dataclass(frozen=True)
class Institution:
    name: str
    share: float
    city: str
    # Big 4 在多个城市设有 NPP 网关，目的网关可跟随发起城市
    multi_region: bool = False


class InstitutionSet:
    """
    按市场份额加权的机构集合，支持标量与向量化抽样。
    """

    def __init__(self, institutions):
        self.institutions = list(institutions)
        if not self.institutions:
            raise ConfigError("institution set is empty")
        shares = np.array([inst.share for inst in self.institutions], dtype=float)
        if np.any(shares < 0) or abs(shares.sum() - 1.0) > 1e-9:
            raise ConfigError(f"institution shares must be >= 0 and sum to 1 (got {shares.sum():.6f})")
        self.shares = shares
        self.cities = np.array([inst.city for inst in self.institutions])
        self.multi_region = np.array([inst.multi_region for inst in self.institutions])

    def __len__(self):
        return len(self.institutions)

    def __getitem__(self, idx):
        return self.institutions[idx]

    def sample_indices(self, rng, size):
        return rng.choice(len(self.institutions), size=size, p=self.shares)

    def index_of(self, name):
        for i, inst in enumerate(self.institutions):
            if inst.name == name:
                return i
        raise KeyError(name)


def default_institutions(big4=None, regional_count=None, regional_cities=None):
    """
    Big 4（APRA 份额）+ 平分剩余份额的区域机构，区域机构按城市轮转分布。
    """
    big4 = config.BIG4_INSTITUTIONS if big4 is None else big4
    regional_count = config.REGIONAL_COUNT if regional_count is None else regional_count
    regional_cities = config.REGIONAL_CITIES if regional_cities is None else regional_cities

    members = [Institution(b['name'], float(b['share']), b['city'], multi_region=True) for b in big4]
    residual = 1.0 - sum(inst.share for inst in members)
    if regional_count > 0:
        each = residual / regional_count
        for i in range(regional_count):
            members.append(Institution(f"REG{i + 1:02d}", each, regional_cities[i % len(regional_cities)]))
    return InstitutionSet(members)


def hop_specs(tiers=None):
    tiers = config.HOP_TIERS if tiers is None else tiers
    return {label: HopSpec(label, float(v['mean_ms']), float(v['cv'])) for label, v in tiers.items()}


def city_latencies(table=None):
    table = config.CITY_HUB_MS if table is None else table
    return {city: CityHubLatency(city, float(ms)) for city, ms in table.items()}


def sample_institution(rng, institutions=None):
    institutions = institutions if institutions is not None else default_institutions()
    if not isinstance(institutions, InstitutionSet):
        institutions = InstitutionSet(institutions)
    return institutions[int(institutions.sample_indices(rng, None))]
