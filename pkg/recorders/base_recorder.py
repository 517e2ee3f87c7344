from abc import ABC, abstractmethod


class BaseRecorder(ABC):
    """
    Recorder 抽象基类。
    所有具体的发射器 (CSV, JSON, SVG) 都必须继承此类，写入同一个输出目录。
    """

    def __init__(self, out_dir):
        self.out_dir = out_dir
        self.written = []

    @abstractmethod
    def write_table(self, name, frame):
        """写出一张结果表；空表不产生文件"""
        pass

    @abstractmethod
    def write_summary(self, summary):
        """写出头条汇总 (dict)"""
        pass

    def finish(self):
        """全部表格写完后调用，可用于生成汇总图"""
        return self.written
