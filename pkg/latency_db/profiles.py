from dataclasses import dataclass, field
from typing import Optional

import config
from common.errors import ConfigError, DomainError
from .lognormal import LogNormalParams, fit_lognormal

MODES = ('classical', 'pqc-only', 'hybrid')


def derive_service_mean_from_rho(lambda_tps, c, rho):
    """
    由公布的利用率反推单次服务时间：1/μ = c·ρ/λ，返回 µs。
    """
    if not lambda_tps > 0 or not c >= 1 or not rho > 0:
        raise DomainError(f"lambda, c and rho must be positive (got {lambda_tps}, {c}, {rho})")
    return c * rho / lambda_tps * 1e6


@dataclass(frozen=True)
class EmpiricalStat:
    mean_us: float
    std_us: float
    min_us: Optional[float] = None
    max_us: Optional[float] = None

    def __post_init__(self):
        if not self.mean_us > 0:
            raise DomainError(f"mean_us must be > 0, got {self.mean_us}")
        if self.std_us < 0:
            raise DomainError(f"std_us must be >= 0, got {self.std_us}")
        if self.min_us is not None and self.min_us > self.mean_us:
            raise DomainError("min_us must not exceed mean_us")
        if self.max_us is not None and self.max_us < self.mean_us:
            raise DomainError("max_us must not be below mean_us")

    @property
    def cv(self):
        return self.std_us / self.mean_us

    def lognormal(self):
        return fit_lognormal(self.mean_us, self.std_us)


@dataclass(frozen=True)
class AlgorithmProfile:
    name: str
    mode: str
    sign_mean_us: float
    sign_cv: float
    service_mean_us: float
    pk_bytes: int
    sig_bytes: int
    verify_mean_us: float = 0.0
    delta_p99_ref_ms: Optional[float] = None
    tls_reconnect_ms: Optional[float] = None
    classical: Optional['AlgorithmProfile'] = field(default=None, repr=False)

    def __post_init__(self):
        if self.mode not in MODES:
            raise DomainError(f"{self.name}: unknown mode '{self.mode}'")
        if self.pk_bytes <= 0 or self.sig_bytes <= 0:
            raise DomainError(f"{self.name}: key and signature sizes must be positive")
        if self.mode == 'hybrid' and self.classical is None:
            raise DomainError(f"{self.name}: hybrid mode needs a linked classical profile")
        if self.service_mean_us + 1e-2 < self.sign_mean_us + self.classical_sign_mean_us:
            raise DomainError(f"{self.name}: service_mean_us must cover the signing time")

    @property
    def classical_sign_mean_us(self):
        return self.classical.sign_mean_us if self.classical is not None else 0.0

    @property
    def sign_params(self) -> LogNormalParams:
        return fit_lognormal(self.sign_mean_us, self.sign_mean_us * self.sign_cv)

    @property
    def mu_ops(self):
        """单服务器服务率 (ops/s)"""
        return 1e6 / self.service_mean_us

    @property
    def hop_crypto_mean_us(self):
        """单 hop 的签名 + 验签均值（hybrid 叠加经典签名与验签）"""
        total = self.sign_mean_us + self.verify_mean_us
        if self.classical is not None:
            total += self.classical.sign_mean_us + self.classical.verify_mean_us
        return total

    @property
    def combined_sig_bytes(self):
        """hybrid 报文携带两份签名"""
        if self.classical is not None:
            return self.sig_bytes + self.classical.sig_bytes
        return self.sig_bytes

    @property
    def is_saturating(self):
        return self.name.startswith('SPHINCS+')


def _profile_problems(record):
    problems = []
    name = record.get('name')
    if not name:
        return ["algorithm profile without a name"]
    for key in ('pk_bytes', 'sig_bytes'):
        if not record.get(key, 0) > 0:
            problems.append(f"profile {name}: {key} must be positive")
    if record.get('mode') not in MODES:
        problems.append(f"profile {name}: mode must be one of {', '.join(MODES)}")
    if 'rho_ref' not in record and 'service_mean_us' not in record:
        problems.append(f"profile {name}: needs rho_ref or service_mean_us")
    elif not record.get('rho_ref', record.get('service_mean_us', 0)) > 0:
        problems.append(f"profile {name}: rho_ref/service_mean_us must be positive")
    if record.get('mode') == 'hybrid' and not record.get('classical'):
        problems.append(f"profile {name}: hybrid mode needs a 'classical' profile name")
    return problems


def profiles_from_records(records, default_cv=None, ecdsa_sec1=None, empirical=None):
    """
    从结构化配置记录构造画像，字段名与 AlgorithmProfile 一致；
    service_mean_us 缺省时按 rho_ref 在参考负载下反推。
    sign_cv 的取值顺序：记录自带 > 公布的经验统计 (empirical, 缺省 EMPIRICAL_STATS) > default_cv。
    """
    default_cv = config.DEFAULT_SIGN_CV if default_cv is None else default_cv
    stats = empirical_stats(empirical)
    ecdsa_sec1 = config.ECDSA_SEC1_PUBLIC_KEY if ecdsa_sec1 is None else ecdsa_sec1
    problems = []
    for record in records:
        problems.extend(_profile_problems(record))
    if problems:
        raise ConfigError(problems)

    by_name = {}
    # 先构造非 hybrid，hybrid 需要引用已建好的经典画像
    for record in sorted(records, key=lambda r: r.get('mode') == 'hybrid'):
        service = record.get('service_mean_us')
        if service is None:
            service = derive_service_mean_from_rho(config.REFERENCE_LAMBDA_TPS, config.REFERENCE_SERVERS,
                                                   record['rho_ref'])
        classical = None
        if record.get('mode') == 'hybrid':
            classical = by_name.get(record['classical'])
            if classical is None:
                raise ConfigError(f"profile {record['name']}: unknown classical profile '{record['classical']}'")
        sign_mean = record.get('sign_mean_us')
        if sign_mean is None:
            sign_mean = service - (classical.sign_mean_us if classical else 0.0)
        pk_bytes = int(record['pk_bytes'])
        if ecdsa_sec1 and record['name'].startswith('ECDSA'):
            pk_bytes += 1
        by_name[record['name']] = AlgorithmProfile(
            name=record['name'],
            mode=record['mode'],
            sign_mean_us=float(sign_mean),
            sign_cv=float(_sign_cv(record, stats, default_cv)),
            service_mean_us=float(service),
            pk_bytes=pk_bytes,
            sig_bytes=int(record['sig_bytes']),
            verify_mean_us=float(record.get('verify_mean_us', 0.0)),
            delta_p99_ref_ms=record.get('delta_p99_ref_ms'),
            tls_reconnect_ms=record.get('tls_reconnect_ms'),
            classical=classical,
        )
    # 保持配置里的顺序
    return [by_name[r['name']] for r in records]


def builtin_profiles():
    """内置的 8 种签名配置（含 hybrid 与 SPHINCS+）"""
    return profiles_from_records(config.ALGORITHM_PROFILES)


def profile_map(profiles=None):
    profiles = builtin_profiles() if profiles is None else profiles
    return {p.name: p for p in profiles}


def empirical_stats(table=None):
    table = config.EMPIRICAL_STATS if table is None else table
    return {name: EmpiricalStat(**values) for name, values in table.items()}


def _sign_cv(record, stats, default_cv):
    if record.get('sign_cv') is not None:
        return record['sign_cv']
    if record['name'] in stats:
        return stats[record['name']].cv
    return default_cv
