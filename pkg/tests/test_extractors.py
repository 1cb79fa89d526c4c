"""
抽出器のテストモジュール

このモジュールは、Ramsey / Erdős–Rado / CFS の各構成の結果とトレースをテストします。
"""

from itertools import product

import pytest

from src.extractors.cfs_extractor import CfsConstruction
from src.extractors.extraction_trace import write_trace
from src.extractors.ramsey_extractor import pigeonhole, ramsey_stages
from src.hypergraph_core.colored_hypergraph import (
    BLUE,
    RED,
    ColoredHypergraph,
    is_homogeneous,
)
from src.hypergraph_core.partial_graph import PartialColoredGraph
from src.utils.config import Settings
from src.utils.errors import InputError
from src.utils.logger import Logger


def assert_sound(col, result):
    """結果が返された色で均質であることを確認する"""
    if len(result) >= col.a:
        assert is_homogeneous(col, result.vertices) == result.color
    else:
        assert result.color is None


# --- Ramsey 構成 ---


def test_ramsey_points_majority(extractor):
    """a = 1 の全点彩色で多数派クラスが 3 点以上になることのテスト"""
    for bits in product((RED, BLUE), repeat=5):
        col = ColoredHypergraph(5, 1, 2, bits)
        result, trace = extractor.extract_ramsey(col, 3)
        assert len(result) >= 3
        assert_sound(col, result)
        assert trace.termination == "majority"
        assert trace.stages == []


def test_ramsey_constant_three_uniform(extractor, constant_coloring):
    """a = 3 の全赤彩色で段の色がすべて RED になることのテスト"""
    col = constant_coloring(10, 3, 2, RED)
    result, trace = extractor.extract_ramsey(col, 4)
    assert len(result) >= 4
    assert result.color == RED
    assert [stage.color for stage in trace.stages] == [RED] * 7
    assert trace.termination == "stage_cap"
    assert trace.vertices == tuple(range(1, 8))


def test_ramsey_reaches_target_at_bound(extractor, seeded_coloring, calculator):
    """n = bound(ramsey, 2, 3, 2) なら |H| >= 3 となることのテスト"""
    n = calculator.bound("ramsey", 2, 3, 2).value
    assert n == 32
    for seed in range(20):
        col = seeded_coloring(n, 2, 2, seed)
        result, trace = extractor.extract_ramsey(col, 3)
        assert len(result) >= 3
        assert_sound(col, result)
        assert "below_target" not in trace.flags


def test_ramsey_pigeonhole_size(extractor, seeded_coloring):
    """|H| が色付きの段数の c 分の 1 以上になることのテスト"""
    for seed in range(10):
        col = seeded_coloring(40, 3, 3, seed)
        result, trace = extractor.extract_ramsey(col)
        colored = [s for s in trace.stages if s.color is not None]
        wildcards = len(trace.stages) - len(colored)
        assert len(result) >= -(-len(colored) // 3) + wildcards
        assert trace.termination == "exhausted"
        assert_sound(col, result)


def test_ramsey_exact_inner(extractor, seeded_coloring):
    """内部集合を真の最大にしても結果が均質であることのテスト"""
    col = seeded_coloring(12, 3, 2, 5)
    result, trace = extractor.extract_ramsey(col, 4, exact_inner=True)
    assert "exact_inner" in trace.flags
    assert_sound(col, result)


def test_ramsey_exact_inner_limit(extractor, constant_coloring):
    """真の最大の内部集合は規模の上限を超えると使えないことのテスト"""
    with pytest.raises(InputError) as e:
        extractor.extract_ramsey(constant_coloring(21, 2), 3, exact_inner=True)
    assert e.value.code == "EXT_001"


def test_ramsey_requires_enough_vertices(extractor, constant_coloring):
    """n < a の場合のテスト"""
    with pytest.raises(InputError) as e:
        extractor.extract_ramsey(constant_coloring(2, 3), 3)
    assert e.value.code == "EXT_001"


def test_ramsey_stages_wildcard():
    """|V_i| < a-1 の段が色を持たないことのテスト"""
    stages, termination = ramsey_stages([1, 2, 3], 3, lambda edge: RED, 2)
    assert termination == "exhausted"
    assert [s.color for s in stages] == [RED, None, None]
    result = pigeonhole(stages, 3, 2)
    assert result.vertices == (1, 2, 3)
    assert result.color == RED


def test_pigeonhole_without_colored_stages():
    """色付きの段が無い場合は色なしになることのテスト"""
    stages, _ = ramsey_stages([1, 2], 3, lambda edge: RED, 2)
    result = pigeonhole(stages, 3, 2)
    assert result.vertices == (1, 2)
    assert result.color is None


@pytest.mark.slow
def test_ramsey_all_graphs_on_six_vertices(extractor):
    """K_6 の全 2-彩色で結果が均質であることのテスト"""
    for index in range(2 ** 15):
        bits = [(index >> e) & 1 for e in range(15)]
        col = ColoredHypergraph(6, 2, 2, bits)
        result, _ = extractor.extract_ramsey(col, 3)
        assert len(result) >= 2
        assert_sound(col, result)


# --- Erdős–Rado 構成 ---


def test_erdos_rado_constant(extractor, constant_coloring):
    """a = 3 の全青彩色で最初の 4 頂点が選ばれることのテスト"""
    col = constant_coloring(9, 3, 2, BLUE)
    result, trace = extractor.extract_erdos_rado(col, 4)
    assert result.vertices == (1, 2, 3, 4)
    assert result.color == BLUE
    assert trace.termination == "exhausted"
    assert trace.vertices == tuple(range(1, 10))


def test_erdos_rado_threshold_seventeen(extractor, seeded_coloring):
    """n = 17 の 3-一様 2-彩色で大きさ 3 の均質集合が得られることのテスト"""
    for seed in range(50):
        col = seeded_coloring(17, 3, 2, seed)
        result, trace = extractor.extract_erdos_rado(col, 3)
        assert len(result) == 3
        assert_sound(col, result)
        assert trace.termination == "stage_cap"
        assert len(trace.stages) == 3


def _bit_gap(x, y):
    """x-1 と y-1 が異なる最上位ビット"""
    return ((x - 1) ^ (y - 1)).bit_length()


# n = 17 の 3-一様 2-彩色で、多数派による半減が偏るように作った彩色
STRUCTURED_RULES = {
    "sum_parity": lambda e: sum(e) % 2,
    "min_parity": lambda e: e[0] % 2,
    "mid_parity": lambda e: e[1] % 2,
    "max_parity": lambda e: e[2] % 2,
    "min_max_parity": lambda e: (e[0] + e[2]) % 2,
    "low_pair_parity": lambda e: (e[0] + e[1]) % 2,
    "high_pair_parity": lambda e: (e[1] + e[2]) % 2,
    "gap_order": lambda e: int(e[1] - e[0] > e[2] - e[1]),
    "first_gap_one": lambda e: int(e[1] - e[0] == 1),
    "last_gap_one": lambda e: int(e[2] - e[1] == 1),
    "wide_span": lambda e: int(e[2] - e[0] > 8),
    "upper_half": lambda e: int(e[2] > 9),
    "min_vertex_small": lambda e: int(e[0] <= 3),
    "contains_one": lambda e: int(e[0] == 1),
    "stepping_up": lambda e: int(_bit_gap(e[0], e[1]) > _bit_gap(e[1], e[2])),
    "stepping_up_equal": lambda e: int(_bit_gap(e[0], e[1]) == _bit_gap(e[1], e[2])),
    "gap_parity": lambda e: (e[2] - e[1]) % 2,
    "mod_three": lambda e: int(sum(e) % 3 == 0),
    "product_parity": lambda e: (e[0] * e[1] * e[2]) % 2,
    "alternate_by_min": lambda e: (e[0] + int(e[2] - e[1] > e[1] - e[0])) % 2,
}


@pytest.mark.parametrize("name", sorted(STRUCTURED_RULES))
def test_erdos_rado_threshold_structured(extractor, validator, name):
    """n = 17 の作為的な彩色でも大きさ 3 の均質集合が得られることのテスト"""
    col = ColoredHypergraph.from_function(17, 3, 2, STRUCTURED_RULES[name])
    result, trace = extractor.extract_erdos_rado(col, 3)
    assert len(result) == 3
    assert_sound(col, result)
    assert validator.validate_run(col, result, trace).passed


@pytest.mark.slow
def test_erdos_rado_threshold_many_seeds(extractor, seeded_coloring):
    """n = 17 の乱数彩色 1000 個で大きさ 3 の均質集合が得られることのテスト"""
    for seed in range(1000):
        col = seeded_coloring(17, 3, 2, seed)
        result, _ = extractor.extract_erdos_rado(col, 3)
        assert len(result) == 3, f"seed={seed}"
        assert_sound(col, result)


def test_erdos_rado_halvings_per_stage(extractor, seeded_coloring):
    """段 i の半減回数が C(i-1, a-2) であることのテスト"""
    col = seeded_coloring(80, 4, 2, 1)
    result, trace = extractor.extract_erdos_rado(col)
    assert [len(s.events) for s in trace.stages[:4]] == [0, 0, 1, 3]
    for stage in trace.stages[:4]:
        for event in stage.events:
            assert event.edge[-1] == stage.vertex
            assert event.size_after * 2 >= event.size_before
    assert_sound(col, result)


def test_erdos_rado_pairs(extractor, seeded_coloring):
    """a = 2 の Erdős–Rado 構成のテスト"""
    for seed in range(10):
        col = seeded_coloring(30, 2, 3, seed)
        result, trace = extractor.extract_erdos_rado(col, 3)
        assert_sound(col, result)
        assert all(len(s.events) <= 1 for s in trace.stages)


def test_erdos_rado_requires_pairs(extractor, constant_coloring):
    """a = 1 の場合のテスト"""
    with pytest.raises(InputError) as e:
        extractor.extract_erdos_rado(constant_coloring(5, 1), 3)
    assert e.value.code == "EXT_001"


# --- CFS 構成 ---


def test_cfs3_constant(extractor, constant_coloring):
    """全赤彩色で G_i が単色に育つことのテスト"""
    col = constant_coloring(20, 3, 2, RED)
    result, trace = extractor.extract_cfs3(col, 4)
    assert result.vertices == (1, 2, 3, 4)
    assert result.color == RED
    assert trace.termination == "target_reached"
    assert trace.graphs()[4] == (((1,), RED), ((2,), RED), ((3,), RED))


def test_cfs3_stops_after_first_event(extractor, seeded_coloring):
    """k = 2 では最初の彩色の直後に止まることのテスト"""
    col = seeded_coloring(10, 3, 2, 4)
    result, trace = extractor.extract_cfs3(col, 2)
    assert len(result) == 2
    assert result.color is None
    assert len(trace.stages) == 2
    assert trace.event_count() == 1


def test_cfs3_random_runs(extractor, seeded_coloring, validator):
    """乱数彩色で結果が均質で squash(G_i) が相異なることのテスト"""
    for seed in range(30):
        col = seeded_coloring(50, 3, 2, seed)
        result, trace = extractor.extract_cfs3(col, 4)
        assert_sound(col, result)
        report = validator.validate_run(col, result, trace)
        assert report.law("squash_distinct").passed
        assert report.law("stage_cap").passed


def test_cfs_general_matches_cfs3(extractor, seeded_coloring):
    """a = 3 では一般の構成が 3-一様の構成と同じ実行になることのテスト"""
    for seed in range(100):
        col = seeded_coloring(40, 3, 2, seed)
        r1, t1 = extractor.extract_cfs3(col, 4)
        r2, t2 = extractor.extract_cfs_general(col, 4)
        assert r1 == r2
        assert t1.same_run(t2)
        assert (t1.method, t2.method) == ("cfs3", "cfs_general")


def test_cfs_general_constant_four_uniform(extractor, constant_coloring):
    """a = 4 の全赤彩色で大きさ 5 の集合が得られ G_i が完全であることのテスト"""
    col = constant_coloring(30, 4, 2, RED)
    result, trace = extractor.extract_cfs_general(col, 5)
    assert result.vertices == (1, 2, 3, 4, 5)
    assert result.color == RED
    for key in trace.graphs().values():
        assert PartialColoredGraph.from_key(2, key).is_complete()


def test_cfs_general_random_four_uniform(extractor, seeded_coloring):
    """a = 4 の乱数彩色で結果が均質であることのテスト"""
    for seed in range(10):
        col = seeded_coloring(40, 4, 2, seed)
        result, trace = extractor.extract_cfs_general(col, 4)
        assert_sound(col, result)
        assert trace.termination in ("target_reached", "exhausted", "detection_budget")


def test_cfs_general_detection_budget(constant_coloring):
    """G_i の頂点数が検出上限を超えると打ち切って記録することのテスト"""
    settings = Settings(detection_limit=3, log_level="ERROR")
    col = constant_coloring(30, 4, 2, RED)
    construction = CfsConstruction(col, 6, settings=settings, logger=Logger("ERROR", echo=False))
    result, trace = construction.run()
    assert trace.termination == "detection_budget"
    assert "detection_budget" in trace.flags
    assert "below_target" in trace.flags
    assert result.vertices == (1, 2, 3, 4)
    assert result.color == RED


@pytest.mark.parametrize(
    "a, k, literal",
    [(2, 3, False), (4, 4, True), (4, 2, False), (3, 1, True)],
)
def test_cfs_preconditions(constant_coloring, a, k, literal):
    """CFS 構成の前提条件のテスト"""
    with pytest.raises(InputError) as e:
        CfsConstruction(constant_coloring(10, a), k, literal, Settings(log_level="ERROR"))
    assert e.value.code == "EXT_001"


# --- 窓口 ---


def test_extract_dispatch(extractor, constant_coloring):
    """手法名による振り分けのテスト"""
    col = constant_coloring(12, 3)
    for method in ("ramsey", "erdos_rado", "cfs3", "cfs_general"):
        result, trace = extractor.extract(method, col, 4)
        assert trace.method == method
        assert len(result) >= 4
    with pytest.raises(InputError):
        extractor.extract("cfs3", col)
    with pytest.raises(InputError):
        extractor.extract("unknown", col, 4)


def test_runs_are_deterministic(extractor, seeded_coloring):
    """同じ入力から同じトレースが得られることのテスト"""
    col = seeded_coloring(60, 3, 3, 9)
    for method in ("ramsey", "erdos_rado", "cfs3"):
        _, t1 = extractor.extract(method, col, 4)
        _, t2 = extractor.extract(method, col, 4)
        assert write_trace(t1) == write_trace(t2)
