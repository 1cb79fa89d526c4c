"""
JSDoc: 抽出モジュール - 抽出トレース
概要: 本ファイルは、抽出器の段ごとの記録（選んだ頂点、段の色、彩色イベント、生存集合、G_i のスナップショット、終了理由）を表すデータクラスと、行指向テキスト形式での読み書きを提供します。
仕様: Python (PEP8準拠、type hint使用)
制限: テキスト形式は 1 レコード 1 行。同じ入力からは同じ文字列が得られる
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from ..hypergraph_core.colored_hypergraph import Edge, HomogeneousSet
from ..hypergraph_core.partial_graph import GraphKey
from ..utils.errors import InputError, EXT_003

METHODS: Tuple[str, ...] = ("ramsey", "erdos_rado", "cfs3", "cfs_general")
TERMINATIONS: Tuple[str, ...] = (
    "target_reached",
    "exhausted",
    "stage_cap",
    "detection_budget",
    "majority",
)


@dataclass
class ColoringEvent:
    """1 回の多数派選択（半減）

    edge は erdos_rado では COL** を与えた頂点の組、cfs 系では G_i の辺（添字の組）。
    """

    edge: Edge
    color: int
    size_before: int
    size_after: int


@dataclass
class StageRecord:
    """1 段の記録

    Attributes:
        index (int): 段番号 i（1 始まり）
        vertex (int): 選んだ頂点 x_i
        color (Optional[int]): 段の色 c_i（ramsey のみ。空虚な段は None）
        size_before (int): 段開始時の |V_{i-1}|
        size_after (int): 段終了時の |V_i|
        events (List[ColoringEvent]): 段内の彩色イベント
        survivors (Tuple[int, ...]): 段終了時の V_i
        graph (Optional[GraphKey]): 段終了時の G_i（cfs 系のみ）
    """

    index: int
    vertex: int
    color: Optional[int] = None
    size_before: int = 0
    size_after: int = 0
    events: List[ColoringEvent] = field(default_factory=list)
    survivors: Tuple[int, ...] = ()
    graph: Optional[GraphKey] = None


@dataclass
class ExtractionTrace:
    """抽出 1 回分のトレース"""

    method: str
    a: int
    n: int
    c: int
    k: Optional[int] = None
    stages: List[StageRecord] = field(default_factory=list)
    termination: str = "exhausted"
    flags: List[str] = field(default_factory=list)
    result: Optional[HomogeneousSet] = None

    @property
    def vertices(self) -> Tuple[int, ...]:
        """選んだ頂点 x_1, x_2, ... の列"""
        return tuple(stage.vertex for stage in self.stages)

    def event_count(self) -> int:
        return sum(len(stage.events) for stage in self.stages)

    def graphs(self) -> Dict[int, GraphKey]:
        """段番号から G_i への写像（G_i を持つ段のみ）"""
        return {s.index: s.graph for s in self.stages if s.graph is not None}

    def same_run(self, other: "ExtractionTrace") -> bool:
        """手法名を除いて同一の実行か"""
        return (
            (self.a, self.n, self.c, self.k) == (other.a, other.n, other.c, other.k)
            and self.stages == other.stages
            and self.termination == other.termination
            and self.flags == other.flags
            and self.result == other.result
        )


def _ints(values: Tuple[int, ...]) -> str:
    return ",".join(str(v) for v in values) if values else "-"


def _color(color: Optional[int]) -> str:
    return "-" if color is None else str(color)


def _graph(graph: GraphKey) -> str:
    if not graph:
        return "-"
    return ";".join(".".join(str(v) for v in edge) + f":{color}" for edge, color in graph)


def write_trace(trace: ExtractionTrace) -> str:
    """トレースを行指向テキストに変換する"""
    k = "-" if trace.k is None else str(trace.k)
    lines = [f"trace method={trace.method} a={trace.a} n={trace.n} c={trace.c} k={k}"]
    for stage in trace.stages:
        lines.append(
            f"stage i={stage.index} x={stage.vertex} color={_color(stage.color)} "
            f"before={stage.size_before} after={stage.size_after} "
            f"survivors={_ints(stage.survivors)}"
        )
        for event in stage.events:
            lines.append(
                f"event i={stage.index} edge={_ints(event.edge)} color={event.color} "
                f"before={event.size_before} after={event.size_after}"
            )
        if stage.graph is not None:
            lines.append(f"graph i={stage.index} edges={_graph(stage.graph)}")
    if trace.result is not None:
        lines.append(
            f"result vertices={_ints(trace.result.vertices)} color={_color(trace.result.color)}"
        )
    flags = ",".join(trace.flags) if trace.flags else "-"
    lines.append(f"end termination={trace.termination} flags={flags}")
    return "\n".join(lines) + "\n"


def _fields(parts: List[str], line_no: int) -> Dict[str, str]:
    values: Dict[str, str] = {}
    for part in parts:
        key, sep, value = part.partition("=")
        if not sep:
            raise InputError(EXT_003, f"{line_no} 行目: key=value 形式ではありません: {part}")
        values[key] = value
    return values


def _parse_ints(value: str) -> Tuple[int, ...]:
    return () if value == "-" else tuple(int(v) for v in value.split(","))


def _parse_color(value: str) -> Optional[int]:
    return None if value == "-" else int(value)


def _parse_graph(value: str) -> GraphKey:
    if value == "-":
        return ()
    edges = []
    for item in value.split(";"):
        edge, _, color = item.partition(":")
        edges.append((tuple(int(v) for v in edge.split(".")), int(color)))
    return tuple(edges)


def read_trace(text: str) -> ExtractionTrace:
    """write_trace の出力からトレースを復元する

    Raises:
        InputError: 形式が不正な場合
    """
    trace: Optional[ExtractionTrace] = None
    by_index: Dict[int, StageRecord] = {}
    for line_no, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        kind, *parts = line.split()
        try:
            values = _fields(parts, line_no)
            if kind == "trace":
                trace = ExtractionTrace(
                    method=values["method"],
                    a=int(values["a"]),
                    n=int(values["n"]),
                    c=int(values["c"]),
                    k=None if values["k"] == "-" else int(values["k"]),
                )
                continue
            if trace is None:
                raise InputError(EXT_003, "先頭に trace 行がありません")
            if kind == "stage":
                stage = StageRecord(
                    index=int(values["i"]),
                    vertex=int(values["x"]),
                    color=_parse_color(values["color"]),
                    size_before=int(values["before"]),
                    size_after=int(values["after"]),
                    survivors=_parse_ints(values["survivors"]),
                )
                trace.stages.append(stage)
                by_index[stage.index] = stage
            elif kind == "event":
                by_index[int(values["i"])].events.append(
                    ColoringEvent(
                        edge=_parse_ints(values["edge"]),
                        color=int(values["color"]),
                        size_before=int(values["before"]),
                        size_after=int(values["after"]),
                    )
                )
            elif kind == "graph":
                by_index[int(values["i"])].graph = _parse_graph(values["edges"])
            elif kind == "result":
                trace.result = HomogeneousSet(
                    _parse_ints(values["vertices"]), _parse_color(values["color"])
                )
            elif kind == "end":
                trace.termination = values["termination"]
                flags = values.get("flags", "-")
                trace.flags = [] if flags == "-" else flags.split(",")
            else:
                raise InputError(EXT_003, f"{line_no} 行目: 未知のレコードです: {kind}")
        except (KeyError, ValueError) as e:
            raise InputError(EXT_003, f"{line_no} 行目を解釈できません: {e}")
    if trace is None:
        raise InputError(EXT_003, "トレースが空です")
    if trace.method not in METHODS or trace.termination not in TERMINATIONS:
        raise InputError(
            EXT_003, f"未知の手法または終了理由です: {trace.method}, {trace.termination}"
        )
    return trace


def save_trace(trace: ExtractionTrace, path: str) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(write_trace(trace))


def load_trace(path: str) -> ExtractionTrace:
    """ファイルからトレースを読み込む

    Raises:
        InputError: ファイルが読めない、または形式が不正な場合
    """
    try:
        with open(path, "r", encoding="utf-8") as f:
            return read_trace(f.read())
    except OSError as e:
        raise InputError(EXT_003, f"トレースファイルを開けません: {e}")


def format_result(method: str, result: HomogeneousSet) -> str:
    """結果ファイル（1 行）の内容"""
    return (
        f"result method={method} size={len(result)} "
        f"vertices={_ints(result.vertices)} color={_color(result.color)}\n"
    )


def parse_result(text: str) -> HomogeneousSet:
    """format_result の出力から均質集合を復元する

    Raises:
        InputError: 形式が不正な場合
    """
    lines = [line for line in text.splitlines() if line.startswith("result ")]
    if not lines:
        raise InputError(EXT_003, "result 行がありません")
    try:
        values = _fields(lines[0].split()[1:], 1)
        return HomogeneousSet(_parse_ints(values["vertices"]), _parse_color(values["color"]))
    except (KeyError, ValueError) as e:
        raise InputError(EXT_003, f"result 行を解釈できません: {e}")
