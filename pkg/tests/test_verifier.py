"""
Ramsey 数の全探索のテストモジュール

このモジュールは、小さな Ramsey 数の全探索、証拠彩色の確認、及び乱数彩色の生成をテストします。
"""

from math import comb

import numpy as np
import pytest

from src.hypergraph_core.colored_hypergraph import RED, ColoredHypergraph
from src.utils.config import Settings
from src.utils.errors import InputError
from src.utils.logger import Logger
from src.verifier.ramsey_verifier import (
    RamseyQuery,
    RamseyVerifier,
    coloring_from_index,
    scan_range,
    small_ramsey_table,
)


@pytest.mark.parametrize(
    "a, k, c, expected",
    [(2, 3, 2, 6), (1, 3, 2, 5), (3, 3, 2, 3), (1, 2, 3, 4), (2, 2, 2, 2)],
)
def test_small_ramsey_numbers(verifier, a, k, c, expected):
    """既知の小さな Ramsey 数のテスト"""
    result = verifier.brute_force_ramsey(RamseyQuery(a, k, c))
    assert result.is_exact
    assert result.exact == expected
    assert result.lower == result.upper == expected
    assert verifier.check_witness(result.witness, k) is True
    assert result.witness.n == expected - 1


@pytest.mark.parametrize("c", [2, 3])
@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_point_colorings(verifier, k, c):
    """R(1,k,c) = ck-c+1 のテスト"""
    result = verifier.brute_force_ramsey(RamseyQuery(1, k, c))
    assert result.exact == c * k - c + 1
    assert result.witness.n == c * k - c
    assert verifier.check_witness(result.witness, k) is True


@pytest.mark.parametrize("c", [2, 3])
@pytest.mark.parametrize("a", [1, 2, 3, 4])
def test_diagonal_uniformity(verifier, a, c):
    """R(a,a,c) = a のテスト"""
    result = verifier.brute_force_ramsey(RamseyQuery(a, a, c))
    assert result.exact == a
    assert result.enumerated == 1
    assert verifier.check_witness(result.witness, a) is True


def test_pentagon_is_witness(verifier, pentagon):
    """五角形の彩色が R(2,3,2) > 5 の証拠であることのテスト"""
    assert verifier.check_witness(pentagon, 3) is True
    assert verifier.check_witness(pentagon, 2) is False


def test_check_witness(verifier, constant_coloring):
    """証拠の確認のテスト"""
    assert verifier.check_witness(constant_coloring(6, 3), 4) is False
    assert verifier.check_witness(constant_coloring(3, 3), 4) is True
    with pytest.raises(InputError) as e:
        verifier.check_witness(constant_coloring(3, 3), 0)
    assert e.value.code == "VER_001"


def test_check_witness_budget(constant_coloring):
    """探索ノード数の上限を超えた場合は判定不能になることのテスト"""
    verifier = RamseyVerifier(Settings(search_budget=2, log_level="ERROR"), Logger("ERROR", echo=False))
    col = ColoredHypergraph.from_function(8, 2, 2, lambda edge: sum(edge) % 2)
    assert verifier.check_witness(col, 5) is None


def test_bracket_when_over_budget(verifier):
    """予算を超える n では区間で報告することのテスト"""
    result = verifier.brute_force_ramsey(RamseyQuery(2, 3, 2, budget=100))
    assert not result.is_exact
    assert result.frontier == 5
    assert result.lower == 5
    assert result.upper == 6
    assert result.witness.n == 4
    assert "in [5, 6]" in result.as_text()


def test_bracket_at_n_max(verifier):
    """n_max に達した場合の区間のテスト"""
    result = verifier.brute_force_ramsey(RamseyQuery(2, 3, 2, n_max=4))
    assert not result.is_exact
    assert result.frontier == 5


def test_parallel_search(verifier, monkeypatch):
    """複数プロセスでの全探索が単一プロセスと一致することのテスト"""
    single = verifier.brute_force_ramsey(RamseyQuery(2, 3, 2))
    # 小さな n でもプロセスを分割させる
    monkeypatch.setattr("src.verifier.ramsey_verifier.CHUNK", 64)
    parallel = verifier.brute_force_ramsey(RamseyQuery(2, 3, 2, workers=2))
    assert parallel.exact == single.exact == 6
    assert parallel.enumerated == single.enumerated


@pytest.mark.parametrize(
    "query",
    [RamseyQuery(0, 3), RamseyQuery(3, 2), RamseyQuery(2, 3, c=1), RamseyQuery(2, 3, workers=0)],
)
def test_invalid_query(verifier, query):
    """不正な問い合わせのテスト"""
    with pytest.raises(InputError) as e:
        verifier.brute_force_ramsey(query)
    assert e.value.code == "VER_001"


def test_scan_range_and_decode():
    """列挙番号と彩色の対応のテスト"""
    # K_5 の 2-彩色で三角形を持たない最小の番号
    index = scan_range(5, 2, 3, 2, 0, 2 ** 9)
    assert index is not None
    col = coloring_from_index(5, 2, 2, index)
    assert col.colors[0] == RED
    assert scan_range(6, 2, 3, 2, 0, 2 ** 14) is None


def test_random_coloring(verifier):
    """乱数彩色が seed で決まることのテスト"""
    first = verifier.random_coloring(12, 3, 3, 42)
    second = verifier.random_coloring(12, 3, 3, 42)
    other = verifier.random_coloring(12, 3, 3, 43)
    assert np.array_equal(first.colors, second.colors)
    assert not np.array_equal(first.colors, other.colors)
    assert first.colors.size == comb(12, 3)
    assert set(first.colors.tolist()) <= {0, 1, 2}


def test_small_ramsey_table(verifier):
    """一覧のテスト"""
    results = small_ramsey_table([(1, 3, 2), (2, 3, 2)], verifier)
    assert [r.exact for r in results] == [5, 6]
    assert results[1].as_text().startswith("R(2,3,2) = 6")
