import json
import math
import os

import numpy as np

from common.errors import SimulationError

from .base_recorder import BaseRecorder


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        # JSON 没有 inf / nan
        return None
    return value


def dump_json(path, payload):
    try:
        with open(path, 'w', encoding='utf-8') as f:
            json.dump(_jsonable(payload), f, ensure_ascii=False, indent=2)
    except OSError as e:
        raise SimulationError(f"failed to write {path}: {e}") from e
    return path


class JsonRecorder(BaseRecorder):
    def __init__(self, out_dir, tables=True):
        super().__init__(out_dir)
        self.tables = tables

    def write_table(self, name, frame):
        if not self.tables or frame is None or frame.empty:
            return None
        path = os.path.join(self.out_dir, f"{name}.json")
        self.written.append(dump_json(path, frame.to_dict(orient='records')))
        return path

    def write_summary(self, summary):
        path = os.path.join(self.out_dir, 'summary.json')
        self.written.append(dump_json(path, summary))
        return path
