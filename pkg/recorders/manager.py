from common import log
from common.errors import SimulationError
from common.formatters import round_frame

from .base_recorder import BaseRecorder


class RecorderManager(BaseRecorder):
    """
    Recorder 组合管理器。
    对调用方来说它只是一个普通的 Recorder，实际会把调用分发给内部注册的所有 Recorder。
    单个 Recorder 失败只记警告，不影响其他 Recorder；finish() 时统一抛出。
    """
    def __init__(self, out_dir, recorders: list[BaseRecorder] = None):
        super().__init__(out_dir)
        self.recorders = recorders or []
        self.failures = []

    def add_recorder(self, recorder: BaseRecorder):
        if recorder:
            self.recorders.append(recorder)

    def _dispatch(self, method, *args):
        for r in self.recorders:
            try:
                getattr(r, method)(*args)
            except Exception as e:
                log.warning(f"[{type(r).__name__}] {method} failed: {e}")
                self.failures.append(f"{type(r).__name__}.{method}: {e}")

    def write_table(self, name, frame):
        if frame is None or frame.empty:
            return None
        # 所有格式从同一张取整后的表写出
        self._dispatch('write_table', name, round_frame(frame))

    def write_summary(self, summary):
        self._dispatch('write_summary', summary)

    def finish(self):
        self._dispatch('finish')
        self.written = [p for r in self.recorders for p in r.written]
        if self.failures:
            raise SimulationError(f"{len(self.failures)} emitter failure(s): " + "; ".join(self.failures))
        return self.written
