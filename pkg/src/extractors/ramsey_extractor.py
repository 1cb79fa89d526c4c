"""
JSDoc: 抽出モジュール - 抽出器
概要: 本ファイルは、彩色ハイパーグラフから均質集合を取り出す決定的な抽出器（段ごとの最小元選択と鳩の巣による Ramsey 構成、半減を繰り返して COL** を作る Erdős–Rado 構成）と、CFS 構成を含む全手法の窓口となるRamseyExtractorクラスを提供します。
仕様: Python (PEP8準拠、type hint使用)
制限: 各実行は単一スレッドで決定的。入力彩色は変更しない
"""

from itertools import combinations
from typing import Dict, List, Optional, Tuple

from ..bound_calc.bound_calculator import BoundCalculator
from ..hypergraph_core.colored_hypergraph import (
    ColorFunction,
    ColoredHypergraph,
    Edge,
    HomogeneousSet,
    largest_homogeneous_subset,
    majority_class,
)
from ..utils.config import Settings, load_settings
from ..utils.errors import InputError, EXT_001
from ..utils.logger import Logger
from .cfs_extractor import CfsConstruction
from .extraction_trace import ColoringEvent, ExtractionTrace, StageRecord


def _inner_set(
    pool: List[int], x: int, uniformity: int, color_of: ColorFunction, c: int, exact: bool
) -> Tuple[Edge, Optional[int]]:
    """COL*(A) = COL(A ∪ {x}) について pool 内の均質集合を求める"""

    def starred(edge: Edge) -> Optional[int]:
        return color_of((x,) + edge)

    if uniformity == 1:
        members, color = majority_class(pool, {y: starred((y,)) for y in pool}, c)
        return tuple(members), color
    if exact:
        return largest_homogeneous_subset(pool, uniformity, starred, c)
    stages, _ = ramsey_stages(pool, uniformity, starred, c)
    found = pigeonhole(stages, uniformity, c)
    return found.vertices, found.color


def ramsey_stages(
    vertices: List[int],
    uniformity: int,
    color_of: ColorFunction,
    c: int,
    cap: Optional[int] = None,
    exact_inner: bool = False,
) -> Tuple[List[StageRecord], str]:
    """Ramsey 構成の段を実行する（uniformity >= 2）

    段 i では V の最小元 x_i を取り、残りから COL* について (uniformity-1)-均質な集合を
    V_i とする。V_i が uniformity-1 未満になった段は色を持たない（None）。

    Returns:
        Tuple[List[StageRecord], str]: 段の記録と終了理由（"stage_cap" / "exhausted"）
    """
    survivors = sorted(vertices)
    stages: List[StageRecord] = []
    while survivors:
        if cap is not None and len(stages) >= cap:
            return stages, "stage_cap"
        before = len(survivors)
        x, rest = survivors[0], survivors[1:]
        if len(rest) >= uniformity - 1:
            kept, color = _inner_set(rest, x, uniformity - 1, color_of, c, exact_inner)
            if len(kept) < uniformity - 1:
                color = None
        else:
            kept, color = tuple(rest), None
        stages.append(
            StageRecord(len(stages) + 1, x, color, before, len(kept), survivors=tuple(kept))
        )
        survivors = list(kept)
    return stages, "exhausted"


def pigeonhole(stages: List[StageRecord], uniformity: int, c: int) -> HomogeneousSet:
    """段の色の列から最大の同色クラスを選ぶ（色なしの段は常に含める）"""
    classes: List[List[int]] = [[] for _ in range(c)]
    wildcards: List[int] = []
    for stage in stages:
        if stage.color is None:
            wildcards.append(stage.vertex)
        else:
            classes[stage.color].append(stage.vertex)
    best = max(range(c), key=lambda color: (len(classes[color]), -color))
    members = classes[best] + wildcards
    color = best if classes[best] and len(members) >= uniformity else None
    return HomogeneousSet(members, color)


class RamseyExtractor:
    """
    均質集合の抽出を行うクラス

    Methods:
        extract_ramsey(col, k, exact_inner) -> Tuple[HomogeneousSet, ExtractionTrace]: Ramsey 構成
        extract_erdos_rado(col, k) -> Tuple[HomogeneousSet, ExtractionTrace]: Erdős–Rado 構成
        extract_cfs3(col, k) -> Tuple[HomogeneousSet, ExtractionTrace]: 3-一様の CFS 構成
        extract_cfs_general(col, k) -> Tuple[HomogeneousSet, ExtractionTrace]: 一般の CFS 構成
        extract(method, col, k) -> Tuple[HomogeneousSet, ExtractionTrace]: 手法名による振り分け
    """

    def __init__(
        self,
        settings: Optional[Settings] = None,
        logger: Optional[Logger] = None,
        calculator: Optional[BoundCalculator] = None,
    ) -> None:
        self.settings = settings or load_settings()
        self.logger = logger or Logger(self.settings.log_level)
        self.calculator = calculator or BoundCalculator(self.settings, self.logger)

    def _fail(self, message: str) -> InputError:
        self.logger.log_failure(message, EXT_001)
        return InputError(EXT_001, message)

    def _check(self, col: ColoredHypergraph, k: Optional[int]) -> None:
        if col.n < col.a:
            raise self._fail(f"n={col.n} が a={col.a} 未満です")
        if k is not None and k < 1:
            raise self._fail(f"目標サイズ k は 1 以上である必要があります: k={k}")

    def _finish(self, trace: ExtractionTrace, result: HomogeneousSet) -> None:
        trace.result = result
        if trace.k is not None and len(result) < trace.k:
            trace.flags.append("below_target")
        self.logger.log_info(
            f"{trace.method} 抽出完了: n={trace.n} a={trace.a} c={trace.c} k={trace.k} "
            f"段数={len(trace.stages)} |H|={len(result)} 終了理由={trace.termination}"
        )

    def extract_ramsey(
        self, col: ColoredHypergraph, k: Optional[int] = None, exact_inner: bool = False
    ) -> Tuple[HomogeneousSet, ExtractionTrace]:
        """Ramsey 構成で均質集合を取り出す

        a = 1 では多数派クラスをそのまま返す。k を与えると段数を ck-c+1 で打ち切る。

        Args:
            col (ColoredHypergraph): 入力彩色
            k (Optional[int]): 目標サイズ
            exact_inner (bool): 内部集合を真の最大にする（|V| が上限以下の場合のみ）

        Returns:
            Tuple[HomogeneousSet, ExtractionTrace]: 均質集合とトレース

        Raises:
            InputError: n < a、または exact_inner の規模上限を超えた場合
        """
        self._check(col, k)
        if exact_inner and col.n > self.settings.exact_inner_limit:
            raise self._fail(
                f"exact_inner は n <= {self.settings.exact_inner_limit} のみ使用できます: n={col.n}"
            )
        trace = ExtractionTrace("ramsey", col.a, col.n, col.c, k)
        if exact_inner:
            trace.flags.append("exact_inner")
        if col.a == 1:
            points = list(range(1, col.n + 1))
            members, color = majority_class(points, {v: col.color((v,)) for v in points}, col.c)
            trace.termination = "majority"
            result = HomogeneousSet(members, color)
        else:
            cap = col.c * k - col.c + 1 if k is not None else None
            trace.stages, trace.termination = ramsey_stages(
                list(range(1, col.n + 1)), col.a, col.color, col.c, cap, exact_inner
            )
            for stage in trace.stages:
                self.logger.log_debug(
                    f"ramsey 段 {stage.index}: x={stage.vertex} c={stage.color} |V|={stage.size_after}"
                )
            result = pigeonhole(trace.stages, col.a, col.c)
        self._finish(trace, result)
        return result, trace

    def _erdos_rado_cap(self, a: int, k: Optional[int], c: int, n: int) -> Optional[int]:
        """R(a-1,k-1,c)+1 が厳密に分かり n 以下なら、それを段数の上限にする"""
        if k is None or k < 2:
            return None
        _, value, exact = self.calculator.ramsey_upper(a - 1, k - 1, c)
        if exact and isinstance(value, int) and value + 1 <= n:
            return value + 1
        return None

    def extract_erdos_rado(
        self, col: ColoredHypergraph, k: Optional[int] = None
    ) -> Tuple[HomogeneousSet, ExtractionTrace]:
        """Erdős–Rado 構成で均質集合を取り出す

        段 i で x_1..x_{i-1} の (a-2)-部分集合 A ごとに 1 回ずつ半減し、
        COL**(A ∪ {x_i}) を定める。最後に {x_1..x_{m-1}} 上の COL** から (a-1)-均質な
        k-1 点を取り、その最大元の次に選ばれた頂点を加える。

        Raises:
            InputError: a < 2、または n < a の場合
        """
        if col.a < 2:
            raise self._fail(f"Erdős–Rado 構成には a >= 2 が必要です: a={col.a}")
        self._check(col, k)
        a, c = col.a, col.c
        cap = self._erdos_rado_cap(a, k, c, col.n)
        trace = ExtractionTrace("erdos_rado", a, col.n, c, k)
        survivors = list(range(1, col.n + 1))
        chosen: List[int] = []
        derived: Dict[Edge, int] = {}
        while survivors:
            if cap is not None and len(chosen) >= cap:
                trace.termination = "stage_cap"
                break
            before = len(survivors)
            x = survivors.pop(0)
            events: List[ColoringEvent] = []
            if survivors:
                for subset in combinations(chosen, a - 2):
                    key = subset + (x,)
                    size = len(survivors)
                    survivors, color = majority_class(
                        survivors, {y: col.color(key + (y,)) for y in survivors}, c
                    )
                    derived[key] = color
                    events.append(ColoringEvent(key, color, size, len(survivors)))
            chosen.append(x)
            trace.stages.append(
                StageRecord(
                    len(chosen), x, None, before, len(survivors), events, tuple(survivors)
                )
            )
            self.logger.log_debug(
                f"erdos_rado 段 {len(chosen)}: x={x} 半減 {len(events)} 回 |V|={len(survivors)}"
            )
        result = self._erdos_rado_result(chosen, derived, a, c, k)
        self._finish(trace, result)
        return result, trace

    def _erdos_rado_result(
        self, chosen: List[int], derived: Dict[Edge, int], a: int, c: int, k: Optional[int]
    ) -> HomogeneousSet:
        pool = chosen[:-1]
        if not pool:
            return HomogeneousSet(chosen[:1], None)
        if a == 2:
            members, color = majority_class(pool, {x: derived[(x,)] for x in pool}, c)
            inner: Tuple[Edge, Optional[int]] = (tuple(members), color)
        else:
            stages, _ = ramsey_stages(pool, a - 1, lambda edge: derived[edge], c)
            found = pigeonhole(stages, a - 1, c)
            inner = (found.vertices, found.color)
        inner_vertices, inner_color = inner
        if k is not None:
            inner_vertices = inner_vertices[: max(k - 1, 0)]
        if not inner_vertices:
            return HomogeneousSet(chosen[:1], None)
        # 内部集合の最大元より後に選ばれた最初の頂点
        following = chosen[chosen.index(inner_vertices[-1]) + 1]
        vertices = tuple(inner_vertices) + (following,)
        return HomogeneousSet(vertices, inner_color if len(vertices) >= a else None)

    def extract_cfs3(
        self, col: ColoredHypergraph, k: int
    ) -> Tuple[HomogeneousSet, ExtractionTrace]:
        """3-一様の CFS 構成（G_j = G_i のときだけ辺を彩色する）"""
        return CfsConstruction(col, k, True, self.settings, self.logger).run()

    def extract_cfs_general(
        self, col: ColoredHypergraph, k: int
    ) -> Tuple[HomogeneousSet, ExtractionTrace]:
        """一般の a の CFS 構成（J の全要素 j で G_j と G_i が {1..j-1} 上一致するとき彩色する）"""
        return CfsConstruction(col, k, False, self.settings, self.logger).run()

    def extract(
        self, method: str, col: ColoredHypergraph, k: Optional[int] = None
    ) -> Tuple[HomogeneousSet, ExtractionTrace]:
        """手法名で抽出器を選んで実行する

        Raises:
            InputError: 未知の手法名、または CFS 系で k が無い場合
        """
        if method == "ramsey":
            return self.extract_ramsey(col, k)
        if method == "erdos_rado":
            return self.extract_erdos_rado(col, k)
        if method in ("cfs3", "cfs_general"):
            if k is None:
                raise self._fail(f"{method} には目標サイズ k が必要です")
            if method == "cfs3":
                return self.extract_cfs3(col, k)
            return self.extract_cfs_general(col, k)
        raise self._fail(f"未知の抽出手法です: {method}")


def extract_ramsey(
    col: ColoredHypergraph, k: Optional[int] = None, exact_inner: bool = False
) -> Tuple[HomogeneousSet, ExtractionTrace]:
    return RamseyExtractor().extract_ramsey(col, k, exact_inner)


def extract_erdos_rado(
    col: ColoredHypergraph, k: Optional[int] = None
) -> Tuple[HomogeneousSet, ExtractionTrace]:
    return RamseyExtractor().extract_erdos_rado(col, k)
