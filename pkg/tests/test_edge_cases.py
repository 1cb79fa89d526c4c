"""
エッジケーステストモジュール

このモジュールは、最小の入力・最大の色数・到達不能な目標サイズなどのエッジケースや異常系のテストを行います。
"""

import pytest

from src.hypergraph_core.colored_hypergraph import RED, ColoredHypergraph
from src.utils.errors import InputError


def test_smallest_ramsey_input(extractor, validator, constant_coloring):
    """n = a の Ramsey 構成のテスト"""
    col = constant_coloring(3, 3)
    result, trace = extractor.extract_ramsey(col, 3)
    assert result.vertices == (1, 2, 3)
    assert result.color == RED
    assert [s.color for s in trace.stages] == [RED, None, None]
    assert validator.validate_run(col, result, trace).passed


def test_smallest_erdos_rado_input(extractor, validator, seeded_coloring):
    """n = a = 2 の Erdős–Rado 構成のテスト"""
    col = seeded_coloring(2, 2, 2, 0)
    result, trace = extractor.extract_erdos_rado(col)
    assert result.vertices == (1, 2)
    assert result.color == col.color((1, 2))
    assert validator.validate_run(col, result, trace).passed


def test_smallest_cfs_input(extractor, validator, seeded_coloring):
    """n = a = 3, k = 2 の CFS 構成のテスト"""
    col = seeded_coloring(3, 3, 2, 1)
    result, trace = extractor.extract_cfs3(col, 2)
    assert result.vertices == (1, 2)
    assert result.color is None
    assert trace.termination == "target_reached"
    assert validator.validate_run(col, result, trace).passed


def test_target_of_one(extractor, seeded_coloring):
    """k = 1 では 1 段で止まることのテスト"""
    result, trace = extractor.extract_ramsey(seeded_coloring(10, 2, 2, 3), 1)
    assert len(trace.stages) == 1
    assert result.vertices == (1,)
    assert result.color is None
    assert "below_target" not in trace.flags


def test_unreachable_target(extractor, validator, seeded_coloring):
    """頂点数が足りない場合は below_target を付けて最良の集合を返すことのテスト"""
    col = seeded_coloring(8, 3, 2, 4)
    for method in ("ramsey", "erdos_rado", "cfs3", "cfs_general"):
        result, trace = extractor.extract(method, col, 9)
        assert "below_target" in trace.flags
        assert len(result) < 9
        assert validator.validate_run(col, result, trace).passed


def test_many_colors(extractor, validator):
    """色数 256 の彩色のテスト"""
    col = ColoredHypergraph.constant(6, 2, 256, 255)
    result, trace = extractor.extract_ramsey(col, 3)
    assert result.color == 255
    assert validator.validate_run(col, result, trace).passed


def test_too_many_colors():
    """色数 257 は扱えないことのテスト"""
    with pytest.raises(InputError) as e:
        ColoredHypergraph.constant(4, 2, 257, 0)
    assert e.value.code == "HYP_001"


@pytest.mark.parametrize("method", ["ramsey", "erdos_rado", "cfs3"])
def test_fewer_vertices_than_uniformity(extractor, method):
    """n < a の彩色のテスト"""
    col = ColoredHypergraph.constant(2, 3, 2, RED)
    with pytest.raises(InputError) as e:
        extractor.extract(method, col, 3)
    assert e.value.code == "EXT_001"


def test_invalid_target(extractor, constant_coloring):
    """k = 0 のテスト"""
    with pytest.raises(InputError):
        extractor.extract_ramsey(constant_coloring(5, 2), 0)


def test_input_coloring_is_unchanged(extractor, seeded_coloring):
    """抽出が入力彩色を変更しないことのテスト"""
    col = seeded_coloring(20, 3, 2, 6)
    before = col.colors.copy()
    for method in ("ramsey", "erdos_rado", "cfs3", "cfs_general"):
        extractor.extract(method, col, 4)
    assert (col.colors == before).all()
    assert not col.colors.flags.writeable
