"""テスト設定モジュール"""

import os
import pytest

from src.bound_calc.bound_calculator import BoundCalculator
from src.extractors.ramsey_extractor import RamseyExtractor
from src.hypergraph_core.colored_hypergraph import RED, ColoredHypergraph
from src.lemma_oracle.lemma_calculator import LemmaOracle
from src.utils.config import Settings
from src.utils.logger import Logger
from src.verifier.ramsey_verifier import RamseyVerifier, pentagon_coloring
from src.verifier.run_validator import RunValidator


def pytest_runtest_setup(item):
    """テスト実行前の環境チェック"""
    for marker in item.iter_markers():
        if marker.name == "slow" and os.environ.get("RAMSEY_SKIP_SLOW"):
            pytest.skip("RAMSEY_SKIP_SLOW が設定されているため省略します")


@pytest.fixture
def settings():
    """テスト用の実行設定"""
    return Settings(log_level="ERROR")


@pytest.fixture
def logger():
    """画面に出力しないロガー"""
    return Logger("ERROR", echo=False)


@pytest.fixture
def calculator(settings, logger):
    return BoundCalculator(settings, logger)


@pytest.fixture
def extractor(settings, logger, calculator):
    return RamseyExtractor(settings, logger, calculator)


@pytest.fixture
def oracle(settings, logger, calculator):
    return LemmaOracle(settings, logger, calculator)


@pytest.fixture
def verifier(settings, logger, calculator):
    return RamseyVerifier(settings, logger, calculator)


@pytest.fixture
def validator(settings, logger):
    return RunValidator(settings, logger)


@pytest.fixture
def constant_coloring():
    """全辺同色の彩色を作るファクトリ"""

    def make(n, a, c=2, color=RED):
        return ColoredHypergraph.constant(n, a, c, color)

    return make


@pytest.fixture
def pentagon():
    """K_5 の 3-均質集合を持たない 2-彩色"""
    return pentagon_coloring()


@pytest.fixture
def seeded_coloring(verifier):
    """seed から決定的に定まる乱数彩色を作るファクトリ"""

    def make(n, a, c, seed):
        return verifier.random_coloring(n, a, c, seed)

    return make
