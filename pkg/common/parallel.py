"""
多进程执行工具：worker 数解析与进程池的任务分发、中断回收。
任务结果按提交序号回收，与完成顺序无关。
"""
import math
import multiprocessing as mp
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor, as_completed

from common import log


def get_total_cpu_cores():
    return max(1, os.cpu_count() or 1)


def resolve_worker_count(requested_jobs, total_cores=None):
    """
    将 n_jobs 解析为实际 worker 数。
    规则：
    - n_jobs > 0: 指定 worker 数（上限为机器总核数）
    - n_jobs = -1: 自动保留系统冗余，workers = C - max(2, ceil(0.15 * C))
    - n_jobs < -1: joblib 风格，workers = C - (abs(n_jobs) - 1)
    - n_jobs = 0 或非法值: 降级为 1
    """
    total_cores = get_total_cpu_cores() if total_cores is None else total_cores
    try:
        requested_jobs = int(requested_jobs)
    except (TypeError, ValueError):
        requested_jobs = 1

    if requested_jobs == -1:
        reserved_cores = max(2, math.ceil(total_cores * 0.15))
        return max(1, total_cores - reserved_cores)

    if requested_jobs < -1:
        reserved_cores = abs(requested_jobs) - 1
        return max(1, total_cores - reserved_cores)

    if requested_jobs == 0:
        return 1

    return max(1, min(total_cores, requested_jobs))


def _pick_start_method():
    # Linux 下 fork 共享父进程内存页，其余平台只能 spawn
    if sys.platform.startswith("linux"):
        try:
            mp.get_context("fork")
            return "fork"
        except ValueError:
            pass
    return "spawn"


def force_shutdown_process_pool(executor, futures):
    """
    在 Ctrl-C 等中断场景下，尽快回收 ProcessPoolExecutor 及其子进程。
    """
    if executor is None:
        return

    for fut in futures or []:
        fut.cancel()

    executor.shutdown(wait=False, cancel_futures=True)

    processes = getattr(executor, "_processes", None)
    if not processes:
        return

    for proc in list(processes.values()):
        if proc.is_alive():
            proc.terminate()

    deadline = time.time() + 2.0
    for proc in list(processes.values()):
        proc.join(timeout=max(0.0, deadline - time.time()))


def run_tasks(func, payloads, workers=1):
    """
    对每个 payload 执行 func(payload)，返回与 payloads 同序的结果列表。
    workers <= 1 或只有一个任务时在当前进程内串行执行。
    """
    payloads = list(payloads)
    if workers <= 1 or len(payloads) <= 1:
        return [func(p) for p in payloads]

    start_method = _pick_start_method()
    ctx = mp.get_context(start_method)
    results = [None] * len(payloads)
    executor = None
    futures = {}
    interrupted = False
    try:
        executor = ProcessPoolExecutor(max_workers=min(workers, len(payloads)), mp_context=ctx)
        for idx, payload in enumerate(payloads):
            futures[executor.submit(func, payload)] = idx
        for fut in as_completed(futures):
            results[futures[fut]] = fut.result()
    except KeyboardInterrupt:
        interrupted = True
        log.warning("[Parallel] Ctrl-C detected. Forcing worker shutdown...")
        force_shutdown_process_pool(executor, list(futures))
        raise
    finally:
        if executor is not None and not interrupted:
            executor.shutdown(wait=True, cancel_futures=False)
    return results
