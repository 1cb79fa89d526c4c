"""
JSDoc: ハイパーグラフ基盤モジュール - 彩色完全ハイパーグラフ
概要: 本ファイルは、[n] 上の完全 a-一様ハイパーグラフの辺 c-彩色を表すColoredHypergraphクラス、colex 順位付け、均質性判定、多数派クラス（鳩の巣）選択、均質部分集合の探索、及び彩色ファイルの読み書きを提供します。
仕様: Python (PEP8準拠、type hint使用)
制限: 頂点は 1 始まり。色は 0..c-1 の整数（0 = RED, 1 = BLUE）
"""

from itertools import combinations
from math import comb
from typing import Callable, Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple
import struct

import numpy as np

from ..utils.errors import (
    BudgetExceededError,
    InputError,
    HYP_001,
    HYP_002,
    HYP_003,
    HYP_004,
    EXT_002,
)

RED = 0
BLUE = 1

Edge = Tuple[int, ...]
ColorFunction = Callable[[Edge], Optional[int]]

BINARY_MAGIC = b"RMSY"
BINARY_VERSION = 1


def edge_rank(subset: Sequence[int], n: int, a: int) -> int:
    """a-部分集合の colex 順位を返す

    順位は 1 始まりの s_1 < ... < s_a に対して Σ C(s_i - 1, i) で定義する。

    Args:
        subset (Sequence[int]): 狭義単調増加の a-部分集合
        n (int): 頂点数
        a (int): 一様性

    Returns:
        int: 0..C(n,a)-1 の順位

    Raises:
        InputError: 未ソート・範囲外・要素数不一致の場合
    """
    if len(subset) != a:
        raise InputError(HYP_001, f"辺の要素数が {a} ではありません: {tuple(subset)}")
    previous = 0
    rank = 0
    for i, v in enumerate(subset, 1):
        if v <= previous or v > n:
            raise InputError(
                HYP_001, f"辺が狭義単調増加でないか範囲外です (n={n}): {tuple(subset)}"
            )
        rank += comb(v - 1, i)
        previous = v
    return rank


def edge_unrank(rank: int, a: int) -> Edge:
    """colex 順位から a-部分集合を復元する（edge_rank の逆写像）

    Args:
        rank (int): 順位
        a (int): 一様性

    Returns:
        Edge: 狭義単調増加の a-部分集合
    """
    if rank < 0:
        raise InputError(HYP_001, f"順位は非負である必要があります: {rank}")
    members: List[int] = []
    remaining = rank
    for i in range(a, 0, -1):
        # C(s-1, i) <= remaining を満たす最大の s を探す
        s = i
        while comb(s, i) <= remaining:
            s += 1
        remaining -= comb(s - 1, i)
        members.append(s)
    return tuple(reversed(members))


class HomogeneousSet:
    """均質集合を表すクラス

    Attributes:
        vertices (Tuple[int, ...]): 昇順の頂点列
        color (Optional[int]): 共通色（|H| < a で空虚に均質な場合は None）
    """

    def __init__(self, vertices: Iterable[int], color: Optional[int]) -> None:
        self.vertices = tuple(sorted(vertices))
        self.color = color

    def __len__(self) -> int:
        return len(self.vertices)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HomogeneousSet):
            return NotImplemented
        return self.vertices == other.vertices and self.color == other.color

    def __repr__(self) -> str:
        return f"HomogeneousSet(vertices={self.vertices}, color={self.color})"


class ColoredHypergraph:
    """[n] 上の完全 a-一様ハイパーグラフの辺 c-彩色

    構築後は不変。色は colex 順位で索引付けした uint8 配列に保持する。

    Attributes:
        n (int): 頂点数
        a (int): 一様性
        c (int): 色数
        colors (np.ndarray): 順位順の色配列（書き込み不可）
    """

    def __init__(self, n: int, a: int, c: int, colors: Sequence[int]) -> None:
        if a < 1 or n < 0:
            raise InputError(HYP_001, f"不正なパラメータです: n={n}, a={a}")
        if c < 2 or c > 256:
            raise InputError(HYP_001, f"色数は 2..256 である必要があります: c={c}")
        array = np.array(colors, dtype=np.int64).reshape(-1)
        expected = comb(n, a)
        if array.size != expected:
            raise InputError(
                HYP_001, f"辺の数が C({n},{a})={expected} と一致しません: {array.size}"
            )
        if array.size and (array.min() < 0 or array.max() >= c):
            raise InputError(HYP_001, f"色の値が 0..{c - 1} の範囲外です")
        self.n = n
        self.a = a
        self.c = c
        self.colors = array.astype(np.uint8)
        self.colors.setflags(write=False)
        # binom[v][i] = C(v, i)
        self._binom = [[comb(v, i) for i in range(a + 1)] for v in range(n + 1)]

    @classmethod
    def constant(cls, n: int, a: int, c: int, color: int) -> "ColoredHypergraph":
        """全辺を同じ色で塗った彩色を返す"""
        return cls(n, a, c, np.full(comb(n, a), color, dtype=np.uint8))

    @classmethod
    def from_function(
        cls, n: int, a: int, c: int, rule: Callable[[Edge], int]
    ) -> "ColoredHypergraph":
        """辺から色を返す関数で彩色を構築する"""
        colors = np.zeros(comb(n, a), dtype=np.uint8)
        for edge in combinations(range(1, n + 1), a):
            colors[edge_rank(edge, n, a)] = rule(edge)
        return cls(n, a, c, colors)

    def rank(self, edge: Sequence[int]) -> int:
        """検証なしの高速な colex 順位"""
        binom = self._binom
        return sum(binom[v - 1][i] for i, v in enumerate(edge, 1))

    def color(self, edge: Sequence[int]) -> int:
        """昇順の a-部分集合の色を返す"""
        return int(self.colors[self.rank(edge)])

    def color_of(self, vertices: Iterable[int]) -> int:
        """順不同の a-部分集合の色を返す（入力検証あり）"""
        edge = tuple(sorted(vertices))
        return int(self.colors[edge_rank(edge, self.n, self.a)])

    def edges(self) -> Iterator[Tuple[Edge, int]]:
        """(辺, 色) を colex 順に列挙する"""
        for r in range(self.colors.size):
            yield edge_unrank(r, self.a), int(self.colors[r])

    def color_counts(self) -> Dict[int, int]:
        """色ごとの辺数を返す"""
        values, counts = np.unique(self.colors, return_counts=True)
        return {int(v): int(n) for v, n in zip(values, counts)}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ColoredHypergraph):
            return NotImplemented
        return (
            (self.n, self.a, self.c) == (other.n, other.a, other.c)
            and np.array_equal(self.colors, other.colors)
        )

    def __repr__(self) -> str:
        return f"ColoredHypergraph(n={self.n}, a={self.a}, c={self.c})"

    # --- 入出力 ---

    def to_text(self) -> str:
        """テキスト形式（先頭行 "a n c"、以降 1 辺 1 行）に変換する"""
        lines = [f"{self.a} {self.n} {self.c}"]
        for edge, color in self.edges():
            lines.append(" ".join(str(v) for v in edge) + f" {color}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "ColoredHypergraph":
        """テキスト形式から彩色を読み込む

        Raises:
            InputError: ヘッダ不正・辺の欠落や重複・範囲外の場合
        """
        rows = [line.split() for line in text.splitlines() if line.strip()]
        if not rows or len(rows[0]) != 3:
            raise InputError(HYP_002, "ヘッダ行 'a n c' がありません")
        try:
            a, n, c = (int(x) for x in rows[0])
            body = [[int(x) for x in row] for row in rows[1:]]
        except ValueError as e:
            raise InputError(HYP_002, f"数値として解釈できない値があります: {e}")
        if a < 1 or n < 0 or c < 2:
            raise InputError(HYP_002, f"ヘッダの値が不正です: a={a} n={n} c={c}")
        colors = np.full(comb(n, a), -1, dtype=np.int64)
        for row in body:
            if len(row) != a + 1:
                raise InputError(HYP_002, f"辺の行の要素数が不正です: {row}")
            r = edge_rank(tuple(row[:a]), n, a)
            if colors[r] != -1:
                raise InputError(HYP_002, f"辺が重複しています: {tuple(row[:a])}")
            colors[r] = row[a]
        missing = np.flatnonzero(colors < 0)
        if missing.size:
            raise InputError(
                HYP_002, f"辺が欠落しています（{missing.size} 本）: 例 {edge_unrank(int(missing[0]), a)}"
            )
        return cls(n, a, c, colors)

    def to_bytes(self) -> bytes:
        """バイナリ形式（ヘッダ + 1 辺あたり ⌈log2 c⌉ ビットの詰め込み）に変換する"""
        width = max(1, (self.c - 1).bit_length())
        header = BINARY_MAGIC + struct.pack("<HIIH", BINARY_VERSION, self.a, self.n, self.c)
        shifts = np.arange(width - 1, -1, -1, dtype=np.uint8)
        bits = ((self.colors[:, None] >> shifts) & 1).astype(np.uint8).reshape(-1)
        return header + np.packbits(bits).tobytes()

    @classmethod
    def from_bytes(cls, data: bytes) -> "ColoredHypergraph":
        """バイナリ形式から彩色を読み込む"""
        head = len(BINARY_MAGIC) + struct.calcsize("<HIIH")
        if len(data) < head or data[: len(BINARY_MAGIC)] != BINARY_MAGIC:
            raise InputError(HYP_002, "バイナリ形式のヘッダが不正です")
        version, a, n, c = struct.unpack("<HIIH", data[len(BINARY_MAGIC) : head])
        if version != BINARY_VERSION:
            raise InputError(HYP_002, f"未対応のバイナリ形式のバージョンです: {version}")
        width = max(1, (c - 1).bit_length())
        count = comb(n, a)
        bits = np.unpackbits(np.frombuffer(data[head:], dtype=np.uint8))
        if bits.size < count * width:
            raise InputError(HYP_002, "バイナリ形式の色データが不足しています")
        planes = bits[: count * width].reshape(count, width).astype(np.int64)
        weights = 1 << np.arange(width - 1, -1, -1, dtype=np.int64)
        return cls(n, a, c, planes @ weights)

    def save(self, path: str) -> None:
        """拡張子 .bin ならバイナリ形式、それ以外はテキスト形式で保存する"""
        if path.endswith(".bin"):
            with open(path, "wb") as f:
                f.write(self.to_bytes())
        else:
            with open(path, "w", encoding="utf-8") as f:
                f.write(self.to_text())

    @classmethod
    def load(cls, path: str) -> "ColoredHypergraph":
        """ファイルから彩色を読み込む

        Raises:
            InputError: ファイルが読めない、または形式が不正な場合
        """
        try:
            with open(path, "rb") as f:
                data = f.read()
        except OSError as e:
            raise InputError(HYP_002, f"彩色ファイルを開けません: {e}")
        if data.startswith(BINARY_MAGIC):
            return cls.from_bytes(data)
        return cls.from_text(data.decode("utf-8"))


def is_homogeneous(col: ColoredHypergraph, vertices: Iterable[int]) -> Optional[int]:
    """頂点集合が均質なら共通色を、そうでなければ None を返す

    Raises:
        InputError: |H| < a、または範囲外の頂点を含む場合
    """
    members = sorted(set(vertices))
    if len(members) < col.a:
        raise InputError(HYP_003, f"|H|={len(members)} は一様性 a={col.a} 未満です")
    if members[0] < 1 or members[-1] > col.n:
        raise InputError(HYP_003, f"頂点が [1, {col.n}] の範囲外です: {members}")
    common: Optional[int] = None
    for edge in combinations(members, col.a):
        color = col.color(edge)
        if common is None:
            common = color
        elif color != common:
            return None
    return common


def majority_class(
    points: Iterable[int], pointcolor: Mapping[int, int], c: int
) -> Tuple[List[int], int]:
    """最大の色クラスを返す（同数なら最小の色番号）

    Args:
        points (Iterable[int]): 点の集合
        pointcolor (Mapping[int, int]): 点から色への写像
        c (int): 色数

    Returns:
        Tuple[List[int], int]: 昇順の最大クラスとその色

    Raises:
        InputError: 点が空の場合
    """
    members = sorted(points)
    if not members:
        raise InputError(HYP_004, "多数派クラスの入力が空です")
    classes: List[List[int]] = [[] for _ in range(c)]
    for p in members:
        classes[pointcolor[p]].append(p)
    best = max(range(c), key=lambda color: (len(classes[color]), -color))
    return classes[best], best


def find_homogeneous_subset(
    vertices: Sequence[int],
    uniformity: int,
    color_of: ColorFunction,
    size: int,
    c: int,
    node_budget: Optional[int] = None,
) -> Optional[Tuple[Edge, Optional[int]]]:
    """指定サイズの均質部分集合をバックトラックで探す

    色 0..c-1 の順に、辞書順で最初に見つかったものを返す。color_of が None を返す
    部分集合（部分彩色で欠けている辺）は一致しないものとして扱う。

    Args:
        vertices (Sequence[int]): 候補頂点（昇順）
        uniformity (int): 辺の大きさ
        color_of (ColorFunction): 昇順タプルから色を返す関数
        size (int): 求める集合の大きさ
        c (int): 色数
        node_budget (Optional[int]): 探索ノード数の上限

    Returns:
        Optional[Tuple[Edge, Optional[int]]]: (集合, 色)。存在しなければ None。
        size < uniformity の場合は空虚に均質で色は None

    Raises:
        BudgetExceededError: ノード数の上限を超えた場合
    """
    pool = sorted(vertices)
    if size < uniformity:
        if len(pool) >= size:
            return tuple(pool[:size]), None
        return None
    if len(pool) < size:
        return None

    nodes = 0

    def extend(chosen: List[int], start: int, color: int) -> Optional[Edge]:
        nonlocal nodes
        if len(chosen) == size:
            return tuple(chosen)
        for idx in range(start, len(pool) - (size - len(chosen)) + 1):
            nodes += 1
            if node_budget is not None and nodes > node_budget:
                raise BudgetExceededError(
                    EXT_002, f"均質集合の探索ノード数が上限 {node_budget} を超えました"
                )
            v = pool[idx]
            if all(
                color_of(tuple(part) + (v,)) == color
                for part in combinations(chosen, uniformity - 1)
            ):
                chosen.append(v)
                found = extend(chosen, idx + 1, color)
                if found is not None:
                    return found
                chosen.pop()
        return None

    for color in range(c):
        found = extend([], 0, color)
        if found is not None:
            return found, color
    return None


def largest_homogeneous_subset(
    vertices: Sequence[int], uniformity: int, color_of: ColorFunction, c: int
) -> Tuple[Edge, Optional[int]]:
    """最大の均質部分集合を返す（小規模専用の全探索）"""
    best: Tuple[Edge, Optional[int]] = (tuple(sorted(vertices))[:uniformity - 1], None)
    for size in range(uniformity, len(vertices) + 1):
        found = find_homogeneous_subset(vertices, uniformity, color_of, size, c)
        if found is None:
            break
        best = found
    return best
