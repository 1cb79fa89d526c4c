"""
JSDoc: ハイパーグラフ基盤モジュール - 部分彩色ハイパーグラフ
概要: 本ファイルは、CFS 構成で各 x_i に付随する (a-2)-一様の部分彩色ハイパーグラフ G_i を表すPartialColoredGraphクラスと、squash・一致関係（agree）の判定を提供します。
仕様: Python (PEP8準拠、type hint使用)
制限: 変更は所有する抽出実行のみが行う（内部ロックなし）
"""

from itertools import combinations
from typing import Dict, Iterable, List, Optional, Tuple

from .colored_hypergraph import Edge, find_homogeneous_subset
from ..utils.errors import BudgetExceededError, InputError, EXT_002, HYP_001

GraphKey = Tuple[Tuple[Edge, int], ...]


class PartialColoredGraph:
    """部分彩色された (a-2)-一様ハイパーグラフ

    Attributes:
        uniformity (int): 辺の大きさ（a-2 >= 1）
        edges (Dict[Edge, int]): 辺から色への写像
    """

    def __init__(
        self, uniformity: int, edges: Optional[Dict[Edge, int]] = None
    ) -> None:
        if uniformity < 1:
            raise InputError(HYP_001, f"一様性は 1 以上である必要があります: {uniformity}")
        self.uniformity = uniformity
        self.edges: Dict[Edge, int] = {}
        for edge, color in (edges or {}).items():
            self.add_edge(edge, color)

    @classmethod
    def from_key(cls, uniformity: int, key: GraphKey) -> "PartialColoredGraph":
        """snapshot() の結果から復元する"""
        return cls(uniformity, dict(key))

    def add_edge(self, edge: Iterable[int], color: int) -> None:
        """辺を追加する

        Raises:
            InputError: 大きさの不一致、未ソート、または既存の辺の場合
        """
        key = tuple(edge)
        if len(key) != self.uniformity or list(key) != sorted(set(key)):
            raise InputError(HYP_001, f"辺が {self.uniformity}-部分集合ではありません: {key}")
        if key in self.edges:
            raise InputError(HYP_001, f"辺が重複しています: {key}")
        self.edges[key] = color

    def color(self, edge: Edge) -> Optional[int]:
        return self.edges.get(edge)

    @property
    def vertices(self) -> Tuple[int, ...]:
        """辺の要素の和集合（昇順）"""
        return tuple(sorted({v for edge in self.edges for v in edge}))

    def snapshot(self) -> GraphKey:
        """辺を昇順に並べた不変な表現"""
        return tuple(sorted(self.edges.items()))

    def restricted(self, bound: int) -> Dict[Edge, int]:
        """{1..bound} に含まれる辺だけの写像"""
        return {e: col for e, col in self.edges.items() if e[-1] <= bound}

    def copy(self) -> "PartialColoredGraph":
        return PartialColoredGraph(self.uniformity, dict(self.edges))

    def is_complete(self) -> bool:
        """頂点集合の全 (a-2)-部分集合が辺であるか"""
        return all(
            edge in self.edges for edge in combinations(self.vertices, self.uniformity)
        )

    def color_classes(self, c: int) -> List[List[int]]:
        """一様性 1 の場合の色ごとの点の一覧"""
        classes: List[List[int]] = [[] for _ in range(c)]
        for (v,), color in sorted(self.edges.items()):
            classes[color].append(v)
        return classes

    def homogeneous_subset(
        self, size: int, c: int, limit: Optional[int] = None
    ) -> Optional[Tuple[Edge, Optional[int]]]:
        """大きさ size の均質集合を返す（なければ None）

        一様性 1 なら色の数え上げで厳密に判定し、それ以外は頂点数が limit 以下の
        場合に限り全探索する。

        Raises:
            BudgetExceededError: 頂点数が limit を超えた場合
        """
        vertices = self.vertices
        if self.uniformity == 1 and size >= 1:
            for color, members in enumerate(self.color_classes(c)):
                if len(members) >= size:
                    return tuple(members[:size]), color
            return None
        if limit is not None and len(vertices) > limit:
            raise BudgetExceededError(
                EXT_002,
                f"G の頂点数 {len(vertices)} が均質集合検出の上限 {limit} を超えました",
            )
        return find_homogeneous_subset(vertices, self.uniformity, self.color, size, c)

    def largest_homogeneous(
        self, c: int, cap: int, limit: Optional[int] = None
    ) -> Tuple[Edge, Optional[int]]:
        """大きさ cap 未満で最大の均質集合を返す（同数なら最小の色番号）"""
        if self.uniformity == 1:
            classes = self.color_classes(c)
            best = max(range(c), key=lambda color: (len(classes[color]), -color))
            if not classes[best]:
                return (), None
            return tuple(classes[best][: max(cap - 1, 0)]), best
        best_found: Tuple[Edge, Optional[int]] = ((), None)
        for size in range(1, cap):
            found = self.homogeneous_subset(size, c, limit)
            if found is None:
                break
            best_found = found
        return best_found

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PartialColoredGraph):
            return NotImplemented
        return self.uniformity == other.uniformity and self.edges == other.edges

    def __repr__(self) -> str:
        return f"PartialColoredGraph(uniformity={self.uniformity}, edges={self.snapshot()})"


def squash(graph: PartialColoredGraph) -> PartialColoredGraph:
    """頂点集合を順序を保って {1..m} に付け替えたグラフを返す"""
    relabel = {v: i for i, v in enumerate(graph.vertices, 1)}
    return PartialColoredGraph(
        graph.uniformity,
        {tuple(relabel[v] for v in edge): color for edge, color in graph.edges.items()},
    )


def _check_uniformity(g1: PartialColoredGraph, g2: PartialColoredGraph) -> None:
    if g1.uniformity != g2.uniformity:
        raise InputError(
            HYP_001, f"一様性が一致しません: {g1.uniformity} != {g2.uniformity}"
        )


def agree_on(g1: PartialColoredGraph, g2: PartialColoredGraph, edge: Iterable[int]) -> bool:
    """両方が同色で辺を持つか、両方とも持たないなら True"""
    _check_uniformity(g1, g2)
    key = tuple(edge)
    return g1.edges.get(key) == g2.edges.get(key)


def agree_prefix(g1: PartialColoredGraph, g2: PartialColoredGraph, bound: int) -> bool:
    """{1..bound} の全 (a-2)-部分集合で agree_on が成り立つなら True"""
    _check_uniformity(g1, g2)
    return g1.restricted(bound) == g2.restricted(bound)
