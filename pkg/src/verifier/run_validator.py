"""
JSDoc: 検証モジュール - 実行検証
概要: 本ファイルは、抽出器の出力（均質集合とトレース）を入力彩色だけを頼りに検証し、均質性・段の順序・半減の下限・KEY 不変条件・squash の相異性・段数の上限などの法則ごとに合否と最初の反例を報告するRunValidatorクラスを提供します。
仕様: Python (PEP8準拠、type hint使用)
制限: 抽出器の内部状態は参照しない。KEY 不変条件の全数検査は Settings.enum_budget 以内の場合のみ行い、超えた場合は未検査として報告する
"""

from itertools import combinations
from math import comb
from typing import Callable, Dict, List, Optional, Set

from ..hypergraph_core.colored_hypergraph import ColoredHypergraph, HomogeneousSet, is_homogeneous
from ..hypergraph_core.partial_graph import PartialColoredGraph, agree_prefix, squash
from ..extractors.extraction_trace import METHODS, ExtractionTrace, StageRecord
from ..extractors.ramsey_extractor import pigeonhole
from ..utils.config import Settings, load_settings
from ..utils.errors import InputError, InvariantViolationError, VER_003, EXT_003
from ..utils.logger import Logger


class LawResult:
    """1 つの法則の検査結果

    Attributes:
        name (str): 法則名
        passed (Optional[bool]): 合否（None は未検査）
        detail (str): 最初の反例、または未検査の理由
    """

    def __init__(self, name: str, passed: Optional[bool], detail: str = "") -> None:
        self.name = name
        self.passed = passed
        self.detail = detail

    def as_text(self) -> str:
        status = {True: "PASS", False: "FAIL", None: "SKIP"}[self.passed]
        return f"{status} {self.name}" + (f": {self.detail}" if self.detail else "")

    def __repr__(self) -> str:
        return f"LawResult({self.name!r}, {self.passed})"


class ValidationReport:
    """検証結果の一覧"""

    def __init__(self, method: str, laws: List[LawResult]) -> None:
        self.method = method
        self.laws = laws

    @property
    def passed(self) -> bool:
        """不合格の法則が 1 つも無いか（未検査は合格扱い）"""
        return all(law.passed is not False for law in self.laws)

    def failures(self) -> List[LawResult]:
        return [law for law in self.laws if law.passed is False]

    def law(self, name: str) -> LawResult:
        for law in self.laws:
            if law.name == name:
                return law
        raise KeyError(name)

    def as_text(self) -> str:
        lines = [f"validate method={self.method} passed={self.passed}"]
        lines += [law.as_text() for law in self.laws]
        return "\n".join(lines) + "\n"


class _Failure(Exception):
    """法則の最初の反例"""


def _check(name: str, body: Callable[[], Optional[str]]) -> LawResult:
    """body が反例を送出すれば不合格、文字列を返せば未検査"""
    try:
        skipped = body()
    except _Failure as e:
        return LawResult(name, False, str(e))
    if skipped:
        return LawResult(name, None, skipped)
    return LawResult(name, True)


class RunValidator:
    """
    抽出結果を独立に検証するクラス

    Methods:
        validate_run(col, result, trace) -> ValidationReport: 全法則の検査
        require(col, result, trace) -> ValidationReport: 不合格なら InvariantViolationError
    """

    def __init__(self, settings: Optional[Settings] = None, logger: Optional[Logger] = None) -> None:
        self.settings = settings or load_settings()
        self.logger = logger or Logger(self.settings.log_level)

    def validate_run(
        self, col: ColoredHypergraph, result: HomogeneousSet, trace: ExtractionTrace
    ) -> ValidationReport:
        """トレースと彩色から法則を再導出して検査する

        Args:
            col (ColoredHypergraph): 抽出に使った彩色
            result (HomogeneousSet): 抽出器が返した均質集合
            trace (ExtractionTrace): 抽出器のトレース

        Returns:
            ValidationReport: 法則ごとの合否

        Raises:
            InputError: トレースが彩色と対応しない、または形式が不正な場合
        """
        self._check_shape(col, trace)
        self.col = col
        self.trace = trace
        self.result = result
        laws = [
            _check("homogeneity", self._homogeneity),
            _check("vertex_order", self._vertex_order),
            _check("size_monotone", self._size_monotone),
            _check("halving_bound", self._halving_bound),
            _check("key_invariant", self._key_invariant),
        ]
        if trace.method == "ramsey":
            laws.append(_check("pigeonhole_selection", self._pigeonhole_selection))
        if trace.method == "erdos_rado":
            laws.append(_check("event_count", self._event_count))
            if col.a == 3:
                laws.append(_check("erdos_rado_halving", self._erdos_rado_halving))
        if trace.method in ("cfs3", "cfs_general"):
            laws += [
                _check("graph_consistency", self._graph_consistency),
                _check("agreement_rule", self._agreement_rule),
                _check("squash_distinct", self._squash_distinct),
                _check("completeness", self._completeness),
            ]
            if col.a == 3 and col.c == 2:
                laws.append(_check("stage_cap", self._stage_cap))
        if trace.method != "ramsey":
            laws.append(_check("halving_accounting", self._halving_accounting))
        report = ValidationReport(trace.method, laws)
        for law in report.failures():
            self.logger.log_warning(f"法則違反: {law.as_text()}")
        self.logger.log_info(
            f"{trace.method} の検証: {sum(law.passed is True for law in laws)}/{len(laws)} 件合格"
        )
        return report

    def require(
        self, col: ColoredHypergraph, result: HomogeneousSet, trace: ExtractionTrace
    ) -> ValidationReport:
        """validate_run と同じだが、不合格があれば例外にする

        Raises:
            InvariantViolationError: いずれかの法則が成り立たない場合
        """
        report = self.validate_run(col, result, trace)
        if not report.passed:
            first = report.failures()[0]
            self.logger.log_failure(f"法則 {first.name} が成り立ちません", VER_003)
            raise InvariantViolationError(VER_003, first.as_text())
        return report

    def _check_shape(self, col: ColoredHypergraph, trace: ExtractionTrace) -> None:
        message = None
        if trace.method not in METHODS:
            message = f"未知の手法です: {trace.method}"
        elif (trace.a, trace.n, trace.c) != (col.a, col.n, col.c):
            message = (
                f"トレース (a={trace.a}, n={trace.n}, c={trace.c}) と彩色 "
                f"(a={col.a}, n={col.n}, c={col.c}) が一致しません"
            )
        elif [s.index for s in trace.stages] != list(range(1, len(trace.stages) + 1)):
            message = "段番号が 1 からの連番ではありません"
        if message is not None:
            self.logger.log_failure(message, EXT_003)
            raise InputError(EXT_003, message)

    # --- 共通の法則 ---

    def _homogeneity(self) -> None:
        col, result = self.col, self.result
        vertices = result.vertices
        if len(set(vertices)) != len(vertices) or any(not 1 <= v <= col.n for v in vertices):
            raise _Failure(f"頂点が重複または範囲外です: {vertices}")
        if self.trace.result is not None and self.trace.result != result:
            raise _Failure(f"トレースの結果 {self.trace.result} と返り値 {result} が異なります")
        if len(vertices) < col.a:
            if result.color is not None:
                raise _Failure(f"|H|={len(vertices)} < a なのに色 {result.color} が付いています")
            return
        actual = is_homogeneous(col, vertices)
        if actual is None or actual != result.color:
            raise _Failure(f"{vertices} は色 {result.color} で均質ではありません (実際: {actual})")

    def _vertex_order(self) -> None:
        remaining = list(range(1, self.col.n + 1))
        previous = 0
        for stage in self.trace.stages:
            if stage.vertex <= previous:
                raise _Failure(f"段 {stage.index}: x_i={stage.vertex} が増加していません")
            if not remaining or stage.vertex != min(remaining):
                raise _Failure(f"段 {stage.index}: x_i={stage.vertex} が V の最小元ではありません")
            if not set(stage.survivors) <= set(remaining) - {stage.vertex}:
                raise _Failure(f"段 {stage.index}: 生存集合が直前の V に含まれていません")
            previous = stage.vertex
            remaining = sorted(stage.survivors)

    def _size_monotone(self) -> None:
        expected_before = self.col.n
        for stage in self.trace.stages:
            if stage.size_before != expected_before:
                raise _Failure(
                    f"段 {stage.index}: |V_(i-1)|={stage.size_before} (期待値 {expected_before})"
                )
            if stage.size_after != len(stage.survivors):
                raise _Failure(f"段 {stage.index}: |V_i| と生存集合の大きさが異なります")
            if stage.size_after > stage.size_before - 1:
                raise _Failure(f"段 {stage.index}: x_i を除いても V が減っていません")
            size = stage.size_before - 1
            for event in stage.events:
                if event.size_before != size or event.size_after > event.size_before:
                    raise _Failure(f"段 {stage.index}: 辺 {event.edge} の前後で大きさが不整合です")
                size = event.size_after
            if stage.events and size != stage.size_after:
                raise _Failure(f"段 {stage.index}: 最後の半減後の大きさが |V_i| と異なります")
            expected_before = stage.size_after

    def _halving_bound(self) -> None:
        c = self.col.c
        for stage in self.trace.stages:
            for event in stage.events:
                if event.size_after * c < event.size_before:
                    raise _Failure(
                        f"段 {stage.index}: 辺 {event.edge} で {event.size_before} -> "
                        f"{event.size_after} と 1/{c} 未満に減っています"
                    )

    def _budget_allows(self, total: int) -> bool:
        return total <= self.settings.enum_budget

    def _key_invariant(self) -> Optional[str]:
        method = self.trace.method
        if method == "ramsey":
            return self._key_ramsey()
        if method == "erdos_rado":
            return self._key_events(lambda stage, edge: edge)
        chosen = self.trace.vertices
        return self._key_events(
            lambda stage, edge: tuple(chosen[j - 1] for j in edge) + (stage.vertex,)
        )

    def _key_ramsey(self) -> Optional[str]:
        col, a = self.col, self.col.a
        if a == 1:
            return None
        total = sum(comb(len(s.survivors), a - 1) for s in self.trace.stages)
        if not self._budget_allows(total):
            return f"(a-1)-部分集合 {total} 個は列挙上限を超えるため未検査"
        for stage in self.trace.stages:
            if stage.color is None:
                if len(stage.survivors) >= a - 1:
                    raise _Failure(f"段 {stage.index}: |V_i| >= a-1 なのに段の色がありません")
                continue
            if len(stage.survivors) < a - 1:
                raise _Failure(f"段 {stage.index}: |V_i| < a-1 なのに段の色 {stage.color} があります")
            for subset in combinations(stage.survivors, a - 1):
                color = col.color((stage.vertex,) + subset)
                if color != stage.color:
                    raise _Failure(
                        f"段 {stage.index}: COL({(stage.vertex,) + subset})={color} != c_i={stage.color}"
                    )
        return None

    def _key_events(self, base_of: Callable[[StageRecord, tuple], tuple]) -> Optional[str]:
        """彩色イベント (辺, 色) の後に生き残った全 y で COL(辺 ∪ {y}) = 色 か"""
        col = self.col
        total = sum(len(s.events) * len(s.survivors) for s in self.trace.stages)
        if not self._budget_allows(total):
            return f"検査対象 {total} 組は列挙上限を超えるため未検査"
        for stage in self.trace.stages:
            for event in stage.events:
                base = base_of(stage, event.edge)
                if len(base) != col.a - 1:
                    raise _Failure(f"段 {stage.index}: 辺 {event.edge} の大きさが不正です")
                for y in stage.survivors:
                    color = col.color(base + (y,))
                    if color != event.color:
                        raise _Failure(
                            f"段 {stage.index}: COL({base + (y,)})={color} != 記録された色 {event.color}"
                        )
        return None

    def _halving_accounting(self) -> None:
        """|V_final| >= n/c^E - L を整数のまま final * c^E >= n - L * c^E として検査する

        (n - L)/c^E の形は使わない。x_i の除去は同じ段の半減より前に起こるため、
        n=4, c=2 で 2 段目の 1 回の半減で |V|=1 となり 3 段目で V が空になる実行
        (L=3, E=1) で成り立たない。
        """
        trace = self.trace
        if not trace.stages:
            return
        events = trace.event_count()
        if trace.method in ("cfs3", "cfs_general"):
            edges = sum(len(graph) for graph in trace.graphs().values())
            if edges != events:
                raise _Failure(f"彩色イベント {events} 件と G_i の辺の総数 {edges} が異なります")
        final = trace.stages[-1].size_after
        removed = len(trace.stages)
        scale = self.col.c ** events
        if final * scale < self.col.n - removed * scale:
            raise _Failure(
                f"|V_final|={final} が n/c^E - L (n={self.col.n}, E={events}, L={removed}) を下回ります"
            )

    # --- 手法ごとの法則 ---

    def _pigeonhole_selection(self) -> None:
        col, trace = self.col, self.trace
        if col.a == 1:
            counts: Dict[int, List[int]] = {color: [] for color in range(col.c)}
            for v in range(1, col.n + 1):
                counts[col.color((v,))].append(v)
            best = max(range(col.c), key=lambda color: (len(counts[color]), -color))
            expected = HomogeneousSet(counts[best], best)
        else:
            expected = pigeonhole(trace.stages, col.a, col.c)
        if expected != self.result:
            raise _Failure(f"鳩の巣による選択 {expected} と結果 {self.result} が異なります")

    def _event_count(self) -> None:
        a = self.col.a
        chosen: List[int] = []
        for stage in self.trace.stages:
            expected = comb(len(chosen), a - 2) if stage.size_before > 1 else 0
            if len(stage.events) != expected:
                raise _Failure(
                    f"段 {stage.index}: 半減 {len(stage.events)} 回 (期待値 C({len(chosen)},{a - 2})={expected})"
                )
            keys = [event.edge for event in stage.events]
            wanted = [subset + (stage.vertex,) for subset in combinations(chosen, a - 2)]
            if expected and keys != wanted:
                raise _Failure(f"段 {stage.index}: COL** の組が x_1..x_(i-1) の部分集合と一致しません")
            chosen.append(stage.vertex)

    def _erdos_rado_halving(self) -> None:
        n, c = self.col.n, self.col.c
        for stage in self.trace.stages:
            floor_bound = (n - 1) // c ** ((stage.index - 1) ** 2)
            if stage.size_after < floor_bound:
                raise _Failure(
                    f"段 {stage.index}: |V_i|={stage.size_after} < (n-1)/c^((i-1)^2) の整数部 {floor_bound}"
                )

    def _graphs(self) -> Dict[int, PartialColoredGraph]:
        u = self.col.a - 2
        return {
            index: PartialColoredGraph.from_key(u, key)
            for index, key in self.trace.graphs().items()
        }

    def _graph_consistency(self) -> None:
        u = self.col.a - 2
        for stage in self.trace.stages:
            if stage.graph is None:
                if stage.events or stage.size_after:
                    raise _Failure(f"段 {stage.index}: G_i が無いのに彩色または生存点があります")
                continue
            try:
                rebuilt = PartialColoredGraph(u, {event.edge: event.color for event in stage.events})
            except InputError as e:
                raise _Failure(f"段 {stage.index}: 不正な辺 ({e.message})")
            if len(stage.events) != len(rebuilt.edges) or rebuilt.snapshot() != tuple(stage.graph):
                raise _Failure(f"段 {stage.index}: G_i がイベントの記録と一致しません")
            order = [(edge[-1], edge[::-1]) for edge in (event.edge for event in stage.events)]
            if order != sorted(order):
                raise _Failure(f"段 {stage.index}: 辺が (最大元, colex) 順に彩色されていません")
            if any(edge[-1] >= stage.index for edge, _ in stage.graph):
                raise _Failure(f"段 {stage.index}: G_i に i 以上の添字があります")

    def _agreement_rule(self) -> None:
        u = self.col.a - 2
        graphs = self._graphs()
        for index, graph in graphs.items():
            admissible: Set[int] = set()
            for j in range(1, index):
                earlier = graphs.get(j)
                if earlier is None:
                    raise _Failure(f"段 {index}: G_{j} がありません")
                if agree_prefix(earlier, graph, j - 1):
                    admissible.add(j)
            for edge in combinations(range(1, index), u):
                colored = edge in graph.edges
                if colored != all(j in admissible for j in edge):
                    raise _Failure(
                        f"段 {index}: 辺 {edge} の彩色 ({colored}) が一致規則と食い違います"
                    )

    def _squash_distinct(self) -> None:
        start = max(2, self.col.a - 1)
        seen: Dict[tuple, int] = {}
        for index, graph in sorted(self._graphs().items()):
            if index < start:
                continue
            key = squash(graph).snapshot()
            if key in seen:
                raise _Failure(f"squash(G_{seen[key]}) = squash(G_{index})")
            seen[key] = index

    def _completeness(self) -> None:
        for index, graph in sorted(self._graphs().items()):
            if not graph.is_complete():
                raise _Failure(f"G_{index} が完全ではありません")

    def _stage_cap(self) -> None:
        k = self.trace.k
        if k is None:
            return
        cap = 2 ** (2 * k - 2) - 1
        if len(self.trace.stages) > cap:
            raise _Failure(f"段数 {len(self.trace.stages)} が 2^(2k-2)-1={cap} を超えます")


def validate_run(
    col: ColoredHypergraph, result: HomogeneousSet, trace: ExtractionTrace
) -> ValidationReport:
    return RunValidator().validate_run(col, result, trace)

