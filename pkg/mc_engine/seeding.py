"""
确定性随机子流：每个 (day_index, purpose) 对应一条独立的 numpy SeedSequence 子流。
所有随机抽样都与算法无关，算法之间因此共享同一组公共随机数。
"""
from enum import IntEnum

import numpy as np

import config


class Purpose(IntEnum):
    SCENARIO = 0
    TRAFFIC = 1
    AR1 = 2
    NETWORK = 3
    PAYID = 4
    SIGN = 5
    BOOTSTRAP = 6


def day_seed(master_seed, day_index, purpose):
    """
    spawn_key = (day_index, purpose)：不同 (日, 用途) 组合互不相交，
    场景选择流也只是其中一个用途，不会与日内抽样流重叠。
    """
    if day_index < 0:
        raise ValueError(f"day_index must be >= 0, got {day_index}")
    return np.random.SeedSequence(entropy=int(master_seed), spawn_key=(int(day_index), int(Purpose(purpose))))


def day_rng(master_seed, day_index, purpose):
    return np.random.default_rng(day_seed(master_seed, day_index, purpose))


def stream_fingerprint(seq, words=4):
    """子流的前几个状态字，仅用于比较与日志"""
    return tuple(int(w) for w in seq.generate_state(words))


def master_seed_or_default(seed=None):
    return config.MASTER_SEED if seed is None else int(seed)
