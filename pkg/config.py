# --- 运行基础配置 ---
# 是否打印运行日志
LOG = True

# 是否打印调试日志（每条链、每个 worker 的细节）
DEBUG = False

# 主随机种子（全部随机流由它派生，固定种子 42）
MASTER_SEED = 42

# 模拟天数 / 每日抽样交易数（1,000 天 × 每天 10,000 笔）
N_DAYS = 1000
N_SAMPLE = 10000

# 并行核心数: >0=指定worker数, -1=自动保留15%且至少2核系统冗余, <-1=保留(abs(n_jobs)-1)核
N_JOBS = 1

# 输出根目录，每次运行写入 OUTPUT_PATH/<时间戳>-seed<k>/
OUTPUT_PATH = 'out'

# 输出格式: csv / json / both
OUTPUT_FORMAT = 'both'

# 是否生成 SVG 图表
PLOTS = False

# 环境变量覆盖前缀，例如 PQSIM_SEED=7
ENV_PREFIX = 'PQSIM_'


# --- SLA 与排队 ---
# 各路由 SLA 阈值 (ms)：NPP 2,000 ms，RITS 30 s，SWIFT 24 h
SLA_MS = {
    'NPP': 2000.0,
    'RITS': 30000.0,
    'SWIFT': 86_400_000.0,
}

# 每个 HSM 集群的并行签名服务器数（基准 c=2）
C_SERVERS = 2

# 排队饱和哨兵值 (µs)
QUEUE_SENTINEL_US = 10_000_000.0

# 各路由单机构到达率 (TPS)：NPP Big 4 = 13.5，RTGS = 0.022，SWIFT = 0.001
ROUTE_LAMBDA_TPS = {
    'NPP': 13.5,
    'RTGS': 0.022,
    'SWIFT': 0.001,
}

# 上述到达率对应的正常日交易量，场景日按比例缩放
REFERENCE_VOLUMES = {
    'NPP': 5_200_000,
    'RTGS': 9_500,
    'SWIFT': 550,
}

# 由公布的利用率反推服务时间使用的参考到达率与服务器数
REFERENCE_LAMBDA_TPS = 13.5
REFERENCE_SERVERS = 2

# 最小服务器搜索的上限
MAX_SERVERS = 256

# wait_below 判据比较的排队等待分位数（p95）
MIN_SERVERS_WAIT_QUANTILE = 0.95

# TPS 扫描范围 (0 ~ 20 TPS)
SWEEP_TPS_MAX = 20.0
SWEEP_TPS_STEP = 0.1


# --- HSM 部署档位 ---
# 每个签名 hop 的附加开销 (ms)
HSM_OVERHEAD_PER_HOP_MS = {
    'software': 0.0,
    'pcie': 0.5,
    'network': 2.0,
}
HSM_TIER = 'software'


# --- 算法画像 ---
# 签名耗时缺省变异系数（仅 SPHINCS+ 有公布的标准差）
DEFAULT_SIGN_CV = 0.25

# ECDSA 公钥是否使用 65 B SEC1 编码（默认 64 B 裸坐标）
ECDSA_SEC1_PUBLIC_KEY = False

# 字段说明：
# - rho_ref: 公布的 λ=13.5、c=2 时的利用率，service_mean_us 由它反推
# - sign_mean_us: 单次签名均值；None 表示等于 service_mean_us
# - verify_mean_us: 每个 hop 接收端验签耗时，标定到公布的 NPP Δp99
# - classical: hybrid 模式下额外串联的经典签名算法
# - tls_reconnect_ms: TLS 重连附加开销；None 表示取相对 ECDSA 的签名边际耗时
ALGORITHM_PROFILES = [
    {'name': 'ECDSA-P256', 'mode': 'classical', 'rho_ref': 0.0002, 'verify_mean_us': 60.0,
     'pk_bytes': 64, 'sig_bytes': 72, 'delta_p99_ref_ms': 0.0, 'tls_reconnect_ms': 0.0},
    {'name': 'Falcon-512', 'mode': 'pqc-only', 'rho_ref': 0.0009, 'verify_mean_us': 31.3,
     'pk_bytes': 897, 'sig_bytes': 666, 'delta_p99_ref_ms': 0.30, 'tls_reconnect_ms': 0.9},
    {'name': 'ML-DSA-44', 'mode': 'pqc-only', 'rho_ref': 0.0012, 'verify_mean_us': 66.9,
     'pk_bytes': 1312, 'sig_bytes': 2420, 'delta_p99_ref_ms': 0.62},
    {'name': 'Falcon-1024', 'mode': 'pqc-only', 'rho_ref': 0.0018, 'verify_mean_us': 48.0,
     'pk_bytes': 1793, 'sig_bytes': 1280, 'delta_p99_ref_ms': 0.90},
    {'name': 'ML-DSA-65', 'mode': 'pqc-only', 'rho_ref': 0.0019, 'verify_mean_us': 98.1,
     'pk_bytes': 1952, 'sig_bytes': 3293, 'delta_p99_ref_ms': 1.16},
    {'name': 'ML-DSA-87', 'mode': 'pqc-only', 'rho_ref': 0.0023, 'verify_mean_us': 141.4,
     'pk_bytes': 2592, 'sig_bytes': 4595, 'delta_p99_ref_ms': 1.57},
    # hybrid: rho_ref 0.0021 覆盖 PQC + 经典两次签名，签名均值只取 PQC 部分
    {'name': 'ML-DSA-65 Hybrid', 'mode': 'hybrid', 'rho_ref': 0.0021, 'sign_mean_us': 281.48,
     'verify_mean_us': 141.0, 'pk_bytes': 1952, 'sig_bytes': 3293, 'delta_p99_ref_ms': 1.69,
     'classical': 'ECDSA-P256'},
    # SPHINCS+: 服务时间为 279.33 ms 复合值，签名约 274 ms；变异系数取自 EMPIRICAL_STATS
    {'name': 'SPHINCS+-SHA2-128s', 'mode': 'pqc-only', 'rho_ref': 1.8855, 'sign_mean_us': 274000.0,
     'verify_mean_us': 5333.0, 'pk_bytes': 32, 'sig_bytes': 7856,
     'delta_p99_ref_ms': 9986.5, 'tls_reconnect_ms': 276.8},
]

# 基准算法（Δp99、Cohen's d、CDI 均相对它计算）
BASELINE_ALGORITHM = 'ECDSA-P256'

# 已公布的经验统计 (µs)，未公布的 min/max 留空；画像未给 sign_cv 时按 std/mean 取变异系数
EMPIRICAL_STATS = {
    'SPHINCS+-SHA2-128s': {'mean_us': 279330.0, 'std_us': 7618.0, 'min_us': None, 'max_us': None},
}


# --- 网络模型 ---
# 各层 hop 的均值 (ms) 与变异系数
HOP_TIERS = {
    'intrabank': {'mean_ms': 1.2, 'cv': 0.25},
    'hub': {'mean_ms': 9.8, 'cv': 0.48},
    'interbank': {'mean_ms': 14.6, 'cv': 0.58},
    'rits': {'mean_ms': 2.8, 'cv': 0.22},
    'swift': {'mean_ms': 96.0, 'cv': 0.88},
}

# 城市到 NPPA hub 的单向时延 (ms)
CITY_HUB_MS = {'SYD': 0.8, 'MEL': 9.2, 'BNE': 5.8}

# 机构市场份额按 APRA 份额，区域机构平分剩余 7.3%
BIG4_INSTITUTIONS = [
    {'name': 'CBA', 'share': 0.271, 'city': 'SYD'},
    {'name': 'ANZ', 'share': 0.241, 'city': 'MEL'},
    {'name': 'NAB', 'share': 0.219, 'city': 'MEL'},
    {'name': 'WBC', 'share': 0.196, 'city': 'SYD'},
]
REGIONAL_COUNT = 9
REGIONAL_CITIES = ['SYD', 'MEL', 'BNE']

# NPP 路由组成:
# - additive: 两端 intrabank + 一次 hub 抽样 + 发起城市与目的网关城市各一段确定性单程
# - hub_inclusive: 视 hub 层 9.8 ms 已包含城市单程，不再叠加，仅作敏感性对比
ROUTE_COMPOSITION = 'additive'

# 目的网关城市:
# - origin: 多区域机构（Big 4）在发起城市接入，区域机构用注册城市
# - registered: 一律使用目的机构的注册城市
MULTI_REGION_GATEWAY = 'origin'

# AR(1) 抖动：α=0.30，σ_AR=0.15；σ_ε=1.0 为标准正态新息，σ_AR 只在放大时使用
AR1_ALPHA = 0.30
AR1_SIGMA_AR = 0.15
AR1_SIGMA_EPS = 1.0

# 抖动后单次抽样的下限 (ms)
JITTER_FLOOR_MS = 0.01


# --- 交易生成 ---
# 场景表：季节权重与各路由日交易量
SCENARIOS = [
    {'name': 'normal', 'weight': 0.762, 'npp_per_day': 5_200_000, 'intrabank_per_day': 8_600_000,
     'rtgs_per_day': 9_500, 'swift_per_day': 550, 'multi_day_family': None},
    {'name': 'christmas', 'weight': 0.082, 'npp_per_day': 8_900_000, 'intrabank_per_day': 8_600_000,
     'rtgs_per_day': 9_500, 'swift_per_day': 550, 'multi_day_family': 'christmas'},
    {'name': 'taxtime', 'weight': 0.082, 'npp_per_day': 6_300_000, 'intrabank_per_day': 8_600_000,
     'rtgs_per_day': 9_500, 'swift_per_day': 550, 'multi_day_family': None},
    {'name': 'eofy', 'weight': 0.055, 'npp_per_day': 6_000_000, 'intrabank_per_day': 8_600_000,
     'rtgs_per_day': 19_000, 'swift_per_day': 550, 'multi_day_family': None},
    {'name': 'crash', 'weight': 0.019, 'npp_per_day': 5_900_000, 'intrabank_per_day': 8_600_000,
     'rtgs_per_day': 32_000, 'swift_per_day': 550, 'multi_day_family': 'crash'},
]

# 固定场景（None=按权重抽样），例如 'christmas'
SCENARIO_OVERRIDE = None

# 日内到达六分量高斯混合 (weight, mean_hour, std_hour)
# 锚点：正常日 10:00 单机构 ≈ 35 TPS，圣诞 10:00 ≈ 60.2 TPS，18:00-22:00 PayID 晚高峰
INTRADAY_MIXTURE = [
    (0.03, 3.0, 3.0),      # 夜间底量
    (0.06, 7.5, 1.0),      # 早间
    (0.3213, 10.0, 1.3),   # 上午机构高峰
    (0.2387, 13.5, 1.8),   # 午间
    (0.15, 16.5, 1.8),     # 下午
    (0.20, 20.0, 1.5),     # 晚间 PayID 高峰
]

# 抽样分配: npp_only（SLA 统计口径）或 proportional（按场景各路由日交易量分配）
SAMPLE_ALLOCATION = 'npp_only'

# 交易金额对数正态 (AUD)，1% NPP 交易超过改道阈值
AMOUNT_LN_MU = 7.7765
AMOUNT_LN_SIGMA = 2.0
HIGH_VALUE_THRESHOLD_AUD = 250_000.0

# PayID 查询 LN(2.0, 0.47)
PAYID_LN_MU = 2.0
PAYID_LN_SIGMA = 0.47
PAYID_RATE = 1.0

# TLS 重连比例 0.1%
TLS_RECONNECT_RATE = 0.001

# 每条路由的签名 hop 数
SIGNING_HOPS = {'NPP': 4, 'RTGS': 2, 'SWIFT': 2, 'INTRABANK': 1}


# --- 统计分析 ---
GEV_BLOCK_SIZE = 50
GEV_BOOTSTRAP = 500
GEV_XI_BOUNDS = (-0.5, 0.5)
# 取原始样本做 GEV / GoF 的日序号
ANALYSIS_SAMPLE_DAY = 0
AD_CRITICAL_5PCT = 0.787
CDI_THRESHOLD = 0.04


# --- 路由与决策模型 ---
# RITS 固定开销 = 网络 p99 14 ms + 结算处理 263 ms；SWIFT = 192 + 645 ms
ROUTE_OVERHEADS_MS = {
    'RITS': {'network_p99_ms': 14.0, 'processing_ms': 263.0},
    'SWIFT': {'network_p99_ms': 192.0, 'processing_ms': 645.0},
}
# ECDSA 单次签名 p99 (ms)，非 SPHINCS+ 的路由签名 p99 = 它 + NPP Δp99
ROUTE_ECDSA_SIGN_P99_MS = 0.15
# SPHINCS+ 直接签名 p99 (ms)
ROUTE_SPHINCS_SIGN_P99_MS = 297.0
# BECS 批量签名规模（5万~10万笔）
BECS_BATCH_SIZE = 50_000

# 交易量增长：年增 15.6%
GROWTH_BASE_YEAR = 2026
GROWTH_BASE_TX_PER_DAY = 5_200_000
GROWTH_RATE = 0.156
GROWTH_YEARS = 4

# HNDL 暴露模型
CRQC_YEAR = 2030
RETENTION_YEARS = 7
DAYS_PER_YEAR = 365
PARTIAL_EXPOSURE_FRACTION = 0.5

# 冷存储价格 USD 0.004/GB/month，单条记录 1-2 KB
STORAGE_USD_PER_GB_MONTH = 0.004
STORAGE_BYTES_PER_RECORD = (1000, 2000)

# 迁移成本 (USD)
MIGRATION_PHASES = [
    {'phase': 0, 'year': 2025, 'label': 'Pre-migration baseline', 'activities': 'Existing ECDSA-only operations',
     'annual_cost_usd': 90_000_000, 'becs_fraction': 0.35, 'recurring': True},
    {'phase': 1, 'year': 2026, 'label': 'Hybrid Deploy', 'activities': 'HSM upgrades, dual-stack deployment',
     'annual_cost_usd': 21_400_000, 'becs_fraction': 0.28, 'recurring': False},
    {'phase': 2, 'year': 2027, 'label': 'PQC Selective', 'activities': 'NPP PQC live, BECS migration',
     'annual_cost_usd': 7_600_000, 'becs_fraction': 0.15, 'recurring': False},
    {'phase': 3, 'year': 2028, 'label': 'Full PQC', 'activities': 'All channels PQC, legacy retired',
     'annual_cost_usd': 1_500_000, 'becs_fraction': 0.05, 'recurring': True},
]
BIG4_PHASE1_COST_USD = 3_700_000
REGIONAL_PHASE1_COST_USD = 733_000
COST_SENSITIVITY = 0.5

# 公布的 ECDSA 基准 NPP p99 (ms)，无语料时 CDI 用它 + 参考 Δp99 作分母
REFERENCE_BASELINE_P99_MS = 43.39

# HSM 档位表与增长表各自重跑语料时使用的天数
STUDY_DAYS = 100

# DoS 积压评估时长 (s)
DOS_DURATION_S = 300.0

# 多种子稳定性研究的默认种子
SEED_STUDY_SEEDS = [42, 43, 44, 45]
