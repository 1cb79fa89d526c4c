"""
統合テストモジュール

このモジュールは、抽出器・上界計算機・全探索・実行検証が連携する機能をテストします。
"""

import numpy as np
import pytest

from src.extractors.extraction_trace import load_trace, save_trace
from src.hypergraph_core.colored_hypergraph import ColoredHypergraph, is_homogeneous
from src.verifier.ramsey_verifier import RamseyQuery

CONFIGS = [
    ("ramsey", 1, 2),
    ("ramsey", 1, 3),
    ("ramsey", 2, 2),
    ("ramsey", 3, 3),
    ("ramsey", 4, 2),
    ("erdos_rado", 2, 2),
    ("erdos_rado", 3, 2),
    ("erdos_rado", 4, 3),
    ("cfs3", 3, 2),
    ("cfs_general", 3, 3),
    ("cfs_general", 4, 2),
]


def test_validation_from_saved_files(tmp_path, extractor, validator, seeded_coloring):
    """保存した彩色とトレースだけから検証できることのテスト"""
    for index, (method, a, c) in enumerate(CONFIGS):
        col = seeded_coloring(30, a, c, index)
        result, trace = extractor.extract(method, col, 4)
        col.save(str(tmp_path / f"{index}.bin"))
        save_trace(trace, str(tmp_path / f"{index}.trace"))

        loaded = ColoredHypergraph.load(str(tmp_path / f"{index}.bin"))
        restored = load_trace(str(tmp_path / f"{index}.trace"))
        report = validator.validate_run(loaded, restored.result, restored)
        assert report.passed, report.as_text()


def test_erdos_rado_bound_is_sufficient(calculator, extractor, seeded_coloring):
    """n が Erdős–Rado の上界以上なら目標サイズに届くことのテスト"""
    n = calculator.bound("erdos_rado", 3, 3, 2).value
    assert n == 17
    for seed in range(30):
        col = seeded_coloring(n, 3, 2, 100 + seed)
        result, trace = extractor.extract_erdos_rado(col, 3)
        assert len(result) >= 3
        assert "below_target" not in trace.flags


def test_ramsey_bound_is_sufficient(calculator, extractor, seeded_coloring):
    """n が Ramsey 構成の上界以上なら目標サイズに届くことのテスト（c = 3）"""
    n = calculator.bound("ramsey", 2, 2, 3).value
    assert n == 3 ** 4
    for seed in range(10):
        result, _ = extractor.extract_ramsey(seeded_coloring(n, 2, 3, seed), 2)
        assert len(result) >= 2


@pytest.mark.parametrize("a, k, c", [(1, 3, 2), (2, 3, 2), (1, 2, 3)])
def test_search_matches_base_bound(verifier, calculator, a, k, c):
    """全探索の値が base 系統の値と一致することのテスト"""
    result = verifier.brute_force_ramsey(RamseyQuery(a, k, c))
    assert result.exact == calculator.bound("base", a, k, c).value


def test_search_within_bound_bracket(verifier, calculator):
    """探索の区間の上端が各系統の上界以下であることのテスト"""
    result = verifier.brute_force_ramsey(RamseyQuery(2, 4, 2, budget=10 ** 4))
    assert not result.is_exact
    assert result.upper == calculator.bound("base", 2, 4, 2).value == 20
    assert result.lower <= result.upper


def test_pentagon_limits_every_method(extractor, pentagon):
    """三角形の無い彩色ではどの手法も 3 点を返さないことのテスト"""
    for method in ("ramsey", "erdos_rado"):
        result, _ = extractor.extract(method, pentagon, 3)
        assert len(result) <= 2
        if len(result) == 2:
            assert result.color == is_homogeneous(pentagon, result.vertices)


def test_cfs_matches_ramsey_on_constant(extractor, constant_coloring):
    """全同色の彩色では全手法が先頭の k 点を返すことのテスト"""
    col = constant_coloring(16, 3)
    vertices = set()
    for method in ("erdos_rado", "cfs3", "cfs_general"):
        result, _ = extractor.extract(method, col, 4)
        vertices.add(result.vertices)
    assert vertices == {(1, 2, 3, 4)}


@pytest.mark.slow
@pytest.mark.parametrize("method, a, c", CONFIGS)
def test_soundness_sweep(extractor, validator, verifier, method, a, c):
    """多数の乱数彩色で全法則が成り立つことのテスト"""
    rng = np.random.default_rng(2024)
    for seed in range(1000):
        n = int(rng.integers(a, 201 if a == 1 else 61))
        k = int(rng.integers(max(2, a - 1), 6))
        col = verifier.random_coloring(n, a, c, seed)
        result, trace = extractor.extract(method, col, k)
        report = validator.validate_run(col, result, trace)
        assert report.passed, f"seed={seed} n={n} k={k}\n{report.as_text()}"
