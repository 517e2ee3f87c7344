"""
配置加载：config.py 默认值 < 覆盖文件 < PQSIM_* 环境变量 < CLI 参数 < --config 字面量。

覆盖文件可以是 JSON，也可以是 Python 字面量字典（ast.literal_eval）；
键名为 config.py 中的常量名，大小写均可。校验一次收集全部问题。
"""
import ast
import json
import os
from dataclasses import dataclass, field

import config
from common.errors import ConfigError, DomainError

OUTPUT_FORMATS = ('csv', 'json', 'both')
COMPOSITIONS = ('hub_inclusive', 'additive')
GATEWAY_RULES = ('origin', 'registered')
ALLOCATIONS = ('npp_only', 'proportional')

# 常用环境变量的短名
ENV_ALIASES = {
    'SEED': 'MASTER_SEED',
    'DAYS': 'N_DAYS',
    'SAMPLE': 'N_SAMPLE',
    'OUT': 'OUTPUT_PATH',
}


def config_keys():
    """config.py 中全部可覆盖的常量名"""
    return sorted(k for k in vars(config) if k.isupper() and not k.startswith('_'))


def config_defaults():
    return {k: getattr(config, k) for k in config_keys()}


def _parse_text(text, source):
    if not text.strip():
        return {}
    try:
        values = json.loads(text)
    except json.JSONDecodeError:
        try:
            values = ast.literal_eval(text)
        except (ValueError, SyntaxError) as e:
            raise ConfigError(f"{source}: neither JSON nor a Python literal ({e})")
    if not isinstance(values, dict):
        raise ConfigError(f"{source}: top level must be a mapping, got {type(values).__name__}")
    return values


def normalize_keys(values, source):
    """键名统一为大写，未知键报错"""
    known = set(config_keys())
    out, unknown = {}, []
    for key, value in values.items():
        name = str(key).upper()
        if name not in known:
            unknown.append(str(key))
            continue
        out[name] = value
    if unknown:
        raise ConfigError([f"{source}: unknown key '{k}'" for k in unknown])
    return out


def load_config(path):
    """读取覆盖文件；空文件等价于全默认配置"""
    if not os.path.isfile(path):
        raise ConfigError(f"config file not found: {path}")
    try:
        with open(path, 'r', encoding='utf-8') as f:
            text = f.read()
    except OSError as e:
        raise ConfigError(f"cannot read config file {path}: {e}")
    return normalize_keys(_parse_text(text, path), path)


def parse_literal(text, source='--config'):
    return normalize_keys(_parse_text(text or '', source), source)


def _coerce(raw, default):
    """环境变量字符串按默认值的类型转换"""
    if isinstance(default, bool):
        lowered = raw.strip().lower()
        if lowered in ('1', 'true', 'yes', 'on'):
            return True
        if lowered in ('0', 'false', 'no', 'off'):
            return False
        raise ValueError(f"not a boolean: {raw!r}")
    if isinstance(default, int):
        return int(raw)
    if isinstance(default, float):
        return float(raw)
    if isinstance(default, str) or default is None:
        return raw
    return ast.literal_eval(raw)


def env_overrides(environ=None, prefix=None):
    environ = os.environ if environ is None else environ
    prefix = config.ENV_PREFIX if prefix is None else prefix
    known = set(config_keys())
    out, problems = {}, []
    for var, raw in environ.items():
        if not var.startswith(prefix):
            continue
        suffix = var[len(prefix):]
        name = ENV_ALIASES.get(suffix, suffix)
        if name not in known:
            problems.append(f"{var}: unknown setting")
            continue
        try:
            out[name] = _coerce(raw, getattr(config, name))
        except (ValueError, SyntaxError) as e:
            problems.append(f"{var}: {e}")
    if problems:
        raise ConfigError(problems)
    return out


def _share_problems(values):
    big4 = values['BIG4_INSTITUTIONS']
    shares = [b.get('share', 0) for b in big4]
    problems = [f"BIG4_INSTITUTIONS: {b.get('name', '?')} share must be in [0, 1]"
                for b in big4 if not 0 <= b.get('share', -1) <= 1]
    total = sum(shares)
    if values['REGIONAL_COUNT'] > 0:
        if not total < 1:
            problems.append(f"BIG4_INSTITUTIONS: shares sum to {total:.4f}, leaving nothing for "
                            f"{values['REGIONAL_COUNT']} regional institutions")
    elif abs(total - 1.0) > 1e-9:
        problems.append(f"BIG4_INSTITUTIONS: shares sum to {total:.4f} with no regional institutions (must be 1)")
    if values['REGIONAL_COUNT'] < 0:
        problems.append("REGIONAL_COUNT must be >= 0")
    return problems


def _collect(problems, builder):
    try:
        builder()
    except ConfigError as e:
        problems.extend(e.problems)
    except (DomainError, KeyError, TypeError) as e:
        problems.append(str(e))


def validate(values):
    """返回违反的全部约束；空列表表示通过"""
    from latency_db.profiles import profiles_from_records
    from network_model.institutions import hop_specs
    from traffic_gen.intraday import default_profile
    from traffic_gen.scenarios import scenario_problems

    problems = []
    for key in ('N_DAYS', 'N_SAMPLE', 'C_SERVERS', 'GEV_BLOCK_SIZE', 'BECS_BATCH_SIZE'):
        if not isinstance(values[key], int) or values[key] < 1:
            problems.append(f"{key} must be an integer >= 1, got {values[key]!r}")
    if not isinstance(values['MASTER_SEED'], int) or values['MASTER_SEED'] < 0:
        problems.append(f"MASTER_SEED must be a non-negative integer, got {values['MASTER_SEED']!r}")
    for route, sla in values['SLA_MS'].items():
        if not sla > 0:
            problems.append(f"SLA_MS[{route}] must be positive, got {sla}")
    if values['HSM_TIER'] not in values['HSM_OVERHEAD_PER_HOP_MS']:
        problems.append(f"HSM_TIER '{values['HSM_TIER']}' not in {', '.join(values['HSM_OVERHEAD_PER_HOP_MS'])}")
    if values['OUTPUT_FORMAT'] not in OUTPUT_FORMATS:
        problems.append(f"OUTPUT_FORMAT must be one of {', '.join(OUTPUT_FORMATS)}")
    if values['ROUTE_COMPOSITION'] not in COMPOSITIONS:
        problems.append(f"ROUTE_COMPOSITION must be one of {', '.join(COMPOSITIONS)}")
    if values['MULTI_REGION_GATEWAY'] not in GATEWAY_RULES:
        problems.append(f"MULTI_REGION_GATEWAY must be one of {', '.join(GATEWAY_RULES)}")
    if values['SAMPLE_ALLOCATION'] not in ALLOCATIONS:
        problems.append(f"SAMPLE_ALLOCATION must be one of {', '.join(ALLOCATIONS)}")
    for route, lam in values['ROUTE_LAMBDA_TPS'].items():
        if lam < 0:
            problems.append(f"ROUTE_LAMBDA_TPS[{route}] must be >= 0")
    if values['SCENARIO_OVERRIDE'] is not None and values['SCENARIO_OVERRIDE'] not in [
            s.get('name') for s in values['SCENARIOS']]:
        problems.append(f"SCENARIO_OVERRIDE '{values['SCENARIO_OVERRIDE']}' is not a configured scenario")

    problems.extend(_share_problems(values))
    problems.extend(scenario_problems(values['SCENARIOS']))
    _collect(problems, lambda: default_profile(values['INTRADAY_MIXTURE']))
    _collect(problems, lambda: hop_specs(values['HOP_TIERS']))
    _collect(problems, lambda: profiles_from_records(values['ALGORITHM_PROFILES'], values['DEFAULT_SIGN_CV'],
                                                     values['ECDSA_SEC1_PUBLIC_KEY'], values['EMPIRICAL_STATS']))
    return problems


@dataclass
class SimulationSettings:
    """解析并校验后的完整配置，每个值带来源标记"""
    values: dict
    provenance: dict = field(default_factory=dict)

    def __getitem__(self, key):
        return self.values[key]

    def echo(self):
        return {k: {'value': self.values[k], 'source': self.provenance.get(k, 'default (config.py)')}
                for k in sorted(self.values)}

    def overridden(self):
        return {k: src for k, src in self.provenance.items() if not src.startswith('default')}

    def apply(self):
        """
        写回 config 模块，供各模块的默认值读取（与 --config 覆盖同一机制）。
        worker 以 fork 启动时继承这些修改。
        """
        for key, value in self.values.items():
            setattr(config, key, value)
        return self

    def build_run_config(self, algo_names=None):
        from latency_db.profiles import profiles_from_records
        from mc_engine.engine import RunConfig

        self.apply()
        profiles = profiles_from_records(self['ALGORITHM_PROFILES'])
        if algo_names:
            by_name = {p.name: p for p in profiles}
            unknown = [a for a in algo_names if a not in by_name]
            if unknown:
                raise ConfigError([f"unknown algorithm '{a}' (known: {', '.join(by_name)})" for a in unknown])
            # 始终带上基准算法，Δp99 与效应量都相对它计算
            keep = set(algo_names) | {self['BASELINE_ALGORITHM']}
            profiles = [p for p in profiles if p.name in keep]
        return RunConfig(algorithms=tuple(profiles))


def resolve_settings(config_path=None, cli_overrides=None, literal=None, environ=None):
    values = config_defaults()
    provenance = {}
    layers = []
    if config_path:
        layers.append(('file', load_config(config_path)))
    layers.append(('env', env_overrides(environ)))
    layers.append(('cli', {k: v for k, v in (cli_overrides or {}).items() if v is not None}))
    if literal:
        layers.append(('--config', parse_literal(literal)))
    for source, layer in layers:
        for key, value in layer.items():
            values[key] = value
            provenance[key] = source

    problems = validate(values)
    if problems:
        raise ConfigError(problems)
    return SimulationSettings(values=values, provenance=provenance)
