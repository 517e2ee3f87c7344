class SimulationError(Exception):
    """所有模拟器异常的基类，CLI 映射为退出码 3。"""


class ConfigError(SimulationError):
    """
    配置校验失败。
    problems 收集全部违反的约束，便于一次性提示给用户（CLI 退出码 2）。
    """

    def __init__(self, problems):
        if isinstance(problems, str):
            problems = [problems]
        self.problems = list(problems)
        super().__init__("Invalid configuration:\n" + "\n".join(f"  - {p}" for p in self.problems))


class DomainError(SimulationError, ValueError):
    """纯函数前置条件不满足（非正均值、空样本等）。"""


class StabilityError(DomainError):
    """Erlang-C 在 a >= c 的不稳定区间被调用，调用方应走哨兵路径。"""


class FitError(SimulationError):
    """数值拟合不收敛，diagnostics 保留每个起点的优化结果。"""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or []
