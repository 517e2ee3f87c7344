import os

from common.errors import SimulationError

from .base_recorder import BaseRecorder


class CsvRecorder(BaseRecorder):

    def write_table(self, name, frame):
        if frame is None or frame.empty:
            return None
        path = os.path.join(self.out_dir, f"{name}.csv")
        try:
            frame.to_csv(path, index=False)
        except OSError as e:
            raise SimulationError(f"failed to write {path}: {e}") from e
        self.written.append(path)
        return path

    def write_summary(self, summary):
        # summary.json 由 JsonRecorder 写出，CSV 模式下同样需要
        return None
