"""
测试公共配置 - slow 标记与共享 fixture
"""
import pytest

from framelab.config import Settings, get_settings
from framelab.orthogonality_graph import build_graph


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run slow tests")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: large instances, run with --runslow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(scope="session")
def settings() -> Settings:
    return get_settings()


@pytest.fixture(scope="session")
def primes(settings):
    return settings.primes


@pytest.fixture(scope="session")
def graph_3_2():
    return build_graph(3, 2)


@pytest.fixture(scope="session")
def graph_3_3():
    return build_graph(3, 3)


@pytest.fixture(scope="session")
def graph_4_2():
    return build_graph(4, 2)
