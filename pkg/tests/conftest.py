import os
import sys

import pytest

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if ROOT not in sys.path:
    sys.path.insert(0, ROOT)

import config as sim_config  # noqa: E402


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run the full-size corpus checks")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: full-size Monte Carlo corpus (enable with --runslow)")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(autouse=True)
def _restore_config():
    """CLI 与 SimulationSettings.apply() 会写回 config 模块，每个用例结束后还原"""
    saved = {k: v for k, v in vars(sim_config).items() if k.isupper()}
    yield
    for key in [k for k in vars(sim_config) if k.isupper() and k not in saved]:
        delattr(sim_config, key)
    for key, value in saved.items():
        setattr(sim_config, key, value)
