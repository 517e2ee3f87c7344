from .base_recorder import BaseRecorder
from .csv_recorder import CsvRecorder
from .json_recorder import JsonRecorder, dump_json
from .manager import RecorderManager
from .svg_recorder import SvgRecorder


def build_recorders(out_dir, fmt='both', plots=False):
    manager = RecorderManager(out_dir)
    if fmt in ('csv', 'both'):
        manager.add_recorder(CsvRecorder(out_dir))
    # summary.json 无论哪种格式都要写出
    manager.add_recorder(JsonRecorder(out_dir, tables=fmt in ('json', 'both')))
    if plots:
        manager.add_recorder(SvgRecorder(out_dir))
    return manager
