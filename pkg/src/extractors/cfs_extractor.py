"""
JSDoc: 抽出モジュール - CFS 構成
概要: 本ファイルは、各 x_i に部分彩色ハイパーグラフ G_i を付随させ、一致関係（agree）を満たす辺だけを多数派選択で彩色していく構成（3-一様の G_j = G_i 規則と、一般の a での agree 規則）を実行するCfsConstructionクラスを提供します。
仕様: Python (PEP8準拠、type hint使用)
制限: a >= 3, k >= max(2, a-1)。a >= 4 の停止判定は G_i の頂点数が検出上限以下の場合のみ厳密に行い、超えた場合は detection_budget で打ち切る
"""

from itertools import combinations
from typing import Dict, List, Optional, Tuple

from ..hypergraph_core.colored_hypergraph import (
    ColoredHypergraph,
    Edge,
    HomogeneousSet,
    majority_class,
)
from ..hypergraph_core.partial_graph import PartialColoredGraph, agree_prefix
from ..utils.config import Settings, load_settings
from ..utils.errors import BudgetExceededError, InputError, EXT_001, EXT_002
from ..utils.logger import Logger
from .extraction_trace import ColoringEvent, ExtractionTrace, StageRecord


def _colex(u: int, top: int) -> List[Edge]:
    """最大要素が top の u-部分集合を colex 順に並べる"""
    rests = sorted(combinations(range(1, top), u - 1), key=lambda t: t[::-1])
    return [rest + (top,) for rest in rests]


class CfsConstruction:
    """CFS 構成の 1 回分の実行

    Attributes:
        col (ColoredHypergraph): 入力彩色
        k (int): 目標サイズ
        literal (bool): True なら 3-一様の規則 G_j = G_i をそのまま判定する
        graphs (List[PartialColoredGraph]): 構築済みの G_1, G_2, ...
    """

    def __init__(
        self,
        col: ColoredHypergraph,
        k: int,
        literal: bool = False,
        settings: Optional[Settings] = None,
        logger: Optional[Logger] = None,
    ) -> None:
        self.settings = settings or load_settings()
        self.logger = logger or Logger(self.settings.log_level)
        if col.a < 3:
            raise self._fail(f"CFS 構成には a >= 3 が必要です: a={col.a}")
        if literal and col.a != 3:
            raise self._fail(f"extract_cfs3 は a = 3 専用です: a={col.a}")
        if k < max(2, col.a - 1):
            raise self._fail(f"CFS 構成には k >= max(2, a-1) が必要です: k={k}")
        if col.n < col.a:
            raise self._fail(f"n={col.n} が a={col.a} 未満です")
        self.col = col
        self.k = k
        self.literal = literal
        self.uniformity = col.a - 2
        self.xs: List[int] = []
        self.graphs: List[PartialColoredGraph] = []

    def _fail(self, message: str) -> InputError:
        self.logger.log_failure(message, EXT_001)
        return InputError(EXT_001, message)

    @property
    def method(self) -> str:
        return "cfs3" if self.literal else "cfs_general"

    def _admissible(self, j: int, current: PartialColoredGraph) -> bool:
        """辺の要素 j について G_j と G_i が {1..j-1} で一致するか"""
        earlier = self.graphs[j - 1]
        if self.literal:
            return earlier == current
        return agree_prefix(earlier, current, j - 1)

    def _stage(
        self, i: int, x: int, survivors: List[int]
    ) -> Tuple[PartialColoredGraph, List[ColoringEvent], List[int]]:
        col, c, u = self.col, self.col.c, self.uniformity
        graph = PartialColoredGraph(u)
        events: List[ColoringEvent] = []
        ok: Dict[int, bool] = {}
        for top in range(1, i):
            # G_i の {1..top-1} 部分はここで確定している
            ok[top] = self._admissible(top, graph)
            if top < u or not ok[top]:
                continue
            for edge in _colex(u, top):
                if not all(ok[j] for j in edge):
                    continue
                base = tuple(self.xs[j - 1] for j in edge) + (x,)
                pointcolor = {y: col.color(base + (y,)) for y in survivors}
                size = len(survivors)
                survivors, color = majority_class(survivors, pointcolor, c)
                graph.add_edge(edge, color)
                events.append(ColoringEvent(edge, color, size, len(survivors)))
        return graph, events, survivors

    def _stop_set(self, graph: PartialColoredGraph) -> Optional[Tuple[Edge, Optional[int]]]:
        return graph.homogeneous_subset(self.k - 1, self.col.c, self.settings.detection_limit)

    def _assemble(self, members: Edge, color: Optional[int], last: int) -> HomogeneousSet:
        vertices = [self.xs[j - 1] for j in members] + [self.xs[last - 1]]
        return HomogeneousSet(vertices, color if len(vertices) >= self.col.a else None)

    def _best_effort(self) -> HomogeneousSet:
        """全 G_L の中で最大の均質集合に x_L を加えたもの（同数なら L の小さい方）"""
        best: Optional[HomogeneousSet] = None
        for last, graph in enumerate(self.graphs, 1):
            try:
                members, color = graph.largest_homogeneous(
                    self.col.c, self.k, self.settings.detection_limit
                )
            except BudgetExceededError:
                continue
            candidate = self._assemble(members, color, last)
            if best is None or len(candidate) > len(best):
                best = candidate
        if best is None:
            return HomogeneousSet(self.xs[:1], None)
        return best

    def run(self) -> Tuple[HomogeneousSet, ExtractionTrace]:
        """構成を最後まで実行する

        Returns:
            Tuple[HomogeneousSet, ExtractionTrace]: 均質集合とトレース
        """
        col = self.col
        trace = ExtractionTrace(self.method, col.a, col.n, col.c, self.k)
        survivors = list(range(1, col.n + 1))
        result: Optional[HomogeneousSet] = None
        while survivors:
            i = len(self.xs) + 1
            before = len(survivors)
            x = survivors.pop(0)
            self.xs.append(x)
            if not survivors:
                trace.stages.append(StageRecord(i, x, None, before, 0))
                break
            graph, events, survivors = self._stage(i, x, survivors)
            self.graphs.append(graph)
            trace.stages.append(
                StageRecord(
                    i, x, None, before, len(survivors), events, tuple(survivors), graph.snapshot()
                )
            )
            self.logger.log_debug(
                f"{self.method} 段 {i}: x={x} 彩色 {len(events)} 件 |V|={len(survivors)}"
            )
            try:
                found = self._stop_set(graph)
            except BudgetExceededError as e:
                self.logger.log_warning(f"{e.message} (段 {i})")
                self.logger.log_failure("均質集合の検出を打ち切りました", EXT_002)
                trace.termination = "detection_budget"
                trace.flags.append("detection_budget")
                break
            if found is not None:
                members, color = found
                result = self._assemble(members, color, i)
                trace.termination = "target_reached"
                break
        if result is None:
            result = self._best_effort()
        if len(result) < self.k:
            trace.flags.append("below_target")
        trace.result = result
        self.logger.log_info(
            f"{self.method} 抽出完了: n={col.n} a={col.a} c={col.c} k={self.k} "
            f"段数={len(trace.stages)} |H|={len(result)} 終了理由={trace.termination}"
        )
        return result, trace


def extract_cfs3(col: ColoredHypergraph, k: int) -> Tuple[HomogeneousSet, ExtractionTrace]:
    return CfsConstruction(col, k, literal=True).run()


def extract_cfs_general(col: ColoredHypergraph, k: int) -> Tuple[HomogeneousSet, ExtractionTrace]:
    return CfsConstruction(col, k).run()
