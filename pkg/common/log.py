import datetime

import config


def _fmt_dt(dt=None):
    """
    内部助手：时间格式化
    - 如果传入 dt，则格式化它
    - 否则取当前系统时间
    """
    if dt is None:
        return datetime.datetime.now().strftime('%Y-%m-%d %H:%M:%S')
    if hasattr(dt, 'isoformat'):
        return dt.isoformat(sep=' ', timespec='seconds')
    return str(dt)


def info(msg, dt=None):
    """普通日志"""
    if getattr(config, 'LOG', True):
        print(f"[{_fmt_dt(dt)}] {msg}")


def debug(msg, dt=None):
    """调试日志，仅在 config.DEBUG 打开时输出"""
    if getattr(config, 'LOG', True) and getattr(config, 'DEBUG', False):
        print(f"[DEBUG] [{_fmt_dt(dt)}] {msg}")


def warning(msg, dt=None):
    """警告日志"""
    print(f"[WARN] [{_fmt_dt(dt)}] {msg}")


def error(msg, dt=None):
    """错误日志"""
    print(f"[ERROR] [{_fmt_dt(dt)}] {msg}")


def banner(title):
    """阶段标题，与 CLI 的进度叙述保持一致"""
    if getattr(config, 'LOG', True):
        print(f"\n--- {title} ---")


def detail(msg):
    """阶段内的缩进明细行"""
    if getattr(config, 'LOG', True):
        print(f"  {msg}")
