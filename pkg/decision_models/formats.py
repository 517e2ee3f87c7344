"""
报文格式容量检查：签名单独超限为 SIG_FAIL，签名可容纳但公钥 + 签名超限为 COMBINED_FAIL。
"""
from dataclasses import dataclass

FORMAT_LIMITS = {
    'SWIFT_MT_2048': 2048,
    'NPP_PAYID_65536': 65536,
    'TLS_RECORD_16384': 16384,
}
VERDICTS = ('PASS', 'SIG_FAIL', 'COMBINED_FAIL')


@dataclass(frozen=True)
class FormatVerdict:
    algo: str
    limit_name: str
    limit_bytes: int
    sig_bytes: int
    combined_bytes: int
    verdict: str


def format_compliance(profile, limits=None):
    limits = FORMAT_LIMITS if limits is None else limits
    # hybrid 报文携带 PQC 与经典两份签名
    sig = profile.combined_sig_bytes
    combined = profile.pk_bytes + sig
    verdicts = []
    for name, limit in limits.items():
        if sig > limit:
            verdict = 'SIG_FAIL'
        elif combined > limit:
            verdict = 'COMBINED_FAIL'
        else:
            verdict = 'PASS'
        verdicts.append(FormatVerdict(algo=profile.name, limit_name=name, limit_bytes=limit, sig_bytes=sig,
                                      combined_bytes=combined, verdict=verdict))
    return verdicts


def format_matrix(profiles, limits=None):
    return [v for p in profiles for v in format_compliance(p, limits)]
