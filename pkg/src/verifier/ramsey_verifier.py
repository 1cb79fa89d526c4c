"""
JSDoc: 検証モジュール - Ramsey 数の全探索
概要: 本ファイルは、小さな Ramsey 数 R(a,k,c) を全彩色の列挙で求めるRamseyVerifierクラス、均質 k-集合を持たない証拠彩色の確認、及び決定的な乱数彩色・代表的な彩色の生成を提供します。
仕様: Python (PEP8準拠、type hint使用)
制限: 列挙は最初の辺の色を 0 に固定する（色の入れ替え対称性）。予算 Settings.search_budget を超える n は区間で報告する
"""

from dataclasses import dataclass
from itertools import combinations
from math import comb
from multiprocessing import Pool
from typing import List, Optional, Tuple

import numpy as np

from ..bound_calc.bound_calculator import BoundCalculator
from ..hypergraph_core.colored_hypergraph import (
    BLUE,
    RED,
    ColoredHypergraph,
    edge_rank,
    find_homogeneous_subset,
)
from ..utils.config import Settings, load_settings
from ..utils.errors import BudgetExceededError, InputError, VER_001
from ..utils.logger import Logger

CHUNK = 1 << 16
# 1 チャンクで展開する (彩色, k-集合, 辺) の要素数の上限
CELL_LIMIT = 1 << 24


@dataclass(frozen=True)
class RamseyQuery:
    """全探索の問い合わせ

    Attributes:
        a, k, c (int): パラメータ（1 <= a <= k, c >= 2）
        n_max (int): 探索する n の上限
        budget (Optional[int]): 列挙する彩色数の上限（None なら設定値）
        workers (int): 列挙を分割するプロセス数
    """

    a: int
    k: int
    c: int = 2
    n_max: int = 16
    budget: Optional[int] = None
    workers: int = 1


class RamseyResult:
    """全探索の結果

    exact が None の場合は lower <= R <= upper の区間（upper は None なら不明）。

    Attributes:
        query (RamseyQuery): 問い合わせ
        exact (Optional[int]): 確定した R(a,k,c)
        lower (int): 下界
        upper (Optional[int]): 上界
        witness (Optional[ColoredHypergraph]): n = lower - 1 で均質 k-集合を持たない彩色
        frontier (int): 判定できなかった最小の n
        enumerated (int): 列挙した彩色数
    """

    def __init__(
        self,
        query: RamseyQuery,
        exact: Optional[int],
        lower: int,
        upper: Optional[int],
        witness: Optional[ColoredHypergraph],
        frontier: int,
        enumerated: int,
    ) -> None:
        self.query = query
        self.exact = exact
        self.lower = lower
        self.upper = upper
        self.witness = witness
        self.frontier = frontier
        self.enumerated = enumerated

    @property
    def is_exact(self) -> bool:
        return self.exact is not None

    def as_text(self) -> str:
        q = self.query
        if self.exact is not None:
            return f"R({q.a},{q.k},{q.c}) = {self.exact} (列挙 {self.enumerated} 件)"
        upper = "?" if self.upper is None else str(self.upper)
        return (
            f"R({q.a},{q.k},{q.c}) in [{self.lower}, {upper}] "
            f"(n={self.frontier} で打ち切り, 列挙 {self.enumerated} 件)"
        )


def _rank_matrix(n: int, a: int, k: int) -> np.ndarray:
    """各 k-部分集合に含まれる a-部分集合の順位の表（形状 C(n,k) x C(k,a)）"""
    rows = [
        [edge_rank(edge, n, a) for edge in combinations(subset, a)]
        for subset in combinations(range(1, n + 1), k)
    ]
    return np.array(rows, dtype=np.int64).reshape(len(rows), comb(k, a))


def _decode(indices: np.ndarray, edge_count: int, c: int) -> np.ndarray:
    """列挙番号を彩色配列に展開する（順位 0 の辺は色 0、順位 e は番号の c 進 e-1 桁目）"""
    colors = np.zeros((indices.size, edge_count), dtype=np.uint8)
    if edge_count > 1:
        powers = c ** np.arange(edge_count - 1, dtype=np.int64)
        colors[:, 1:] = (indices[:, None] // powers[None, :]) % c
    return colors


def scan_range(n: int, a: int, k: int, c: int, start: int, stop: int) -> Optional[int]:
    """番号 [start, stop) の彩色のうち、均質 k-集合を持たない最小の番号を返す"""
    edge_count = comb(n, a)
    ranks = _rank_matrix(n, a, k)
    cells = max(1, ranks.size)
    chunk = max(1, min(CHUNK, CELL_LIMIT // cells))
    for low in range(start, stop, chunk):
        indices = np.arange(low, min(low + chunk, stop), dtype=np.int64)
        colors = _decode(indices, edge_count, c)
        gathered = colors[:, ranks]
        homogeneous = (gathered == gathered[:, :, :1]).all(axis=2).any(axis=1)
        free = np.flatnonzero(~homogeneous)
        if free.size:
            return int(indices[free[0]])
    return None


def coloring_from_index(n: int, a: int, c: int, index: int) -> ColoredHypergraph:
    """列挙番号から彩色を復元する"""
    colors = _decode(np.array([index], dtype=np.int64), comb(n, a), c)[0]
    return ColoredHypergraph(n, a, c, colors)


class RamseyVerifier:
    """
    小さな Ramsey 数の全探索と証拠の確認を行うクラス

    Methods:
        brute_force_ramsey(query) -> RamseyResult: R(a,k,c) の全探索
        check_witness(col, k) -> Optional[bool]: 均質 k-集合が無ければ True
        random_coloring(n, a, c, seed) -> ColoredHypergraph: 決定的な乱数彩色
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
        self.logger.log_failure(message, VER_001)
        return InputError(VER_001, message)

    def _find_witness(self, n: int, a: int, k: int, c: int, workers: int) -> Optional[int]:
        total = c ** max(comb(n, a) - 1, 0)
        if workers <= 1 or total < workers * CHUNK:
            return scan_range(n, a, k, c, 0, total)
        step = -(-total // workers)
        arguments = [
            (n, a, k, c, low, min(low + step, total)) for low in range(0, total, step)
        ]
        with Pool(workers) as pool:
            found = pool.starmap(scan_range, arguments)
        hits = [index for index in found if index is not None]
        return min(hits) if hits else None

    def brute_force_ramsey(self, query: RamseyQuery) -> RamseyResult:
        """R(a,k,c) を n = k から順に全探索で求める

        各 n で均質 k-集合を持たない彩色（証拠）を探し、見つからなかった最初の n を
        R とする。予算を超える n に達したら区間を返す。

        Args:
            query (RamseyQuery): 問い合わせ

        Returns:
            RamseyResult: 厳密値または区間

        Raises:
            InputError: 1 <= a <= k, c >= 2 を満たさない場合
        """
        a, k, c = query.a, query.k, query.c
        if not 1 <= a <= k or c < 2 or query.n_max < 0 or query.workers < 1:
            raise self._fail(f"不正な問い合わせです: {query}")
        budget = self.settings.search_budget if query.budget is None else query.budget
        # k-1 点の彩色は k-集合を持たない
        witness: Optional[ColoredHypergraph] = ColoredHypergraph.constant(k - 1, a, c, RED)
        enumerated = 0
        for n in range(k, query.n_max + 1):
            count = c ** max(comb(n, a) - 1, 0)
            if enumerated + count > budget:
                return self._bracket(query, n, witness, enumerated)
            self.logger.log_info(f"R({a},{k},{c}): n={n} の彩色 {count} 件を列挙します")
            found = self._find_witness(n, a, k, c, query.workers)
            enumerated += count
            if found is None:
                self.logger.log_info(f"R({a},{k},{c}) = {n}")
                return RamseyResult(query, n, n, n, witness, n, enumerated)
            witness = coloring_from_index(n, a, c, found)
        return self._bracket(query, query.n_max + 1, witness, enumerated)

    def _bracket(
        self,
        query: RamseyQuery,
        frontier: int,
        witness: Optional[ColoredHypergraph],
        enumerated: int,
    ) -> RamseyResult:
        _, value, _ = self.calculator.ramsey_upper(query.a, query.k, query.c)
        upper = value if isinstance(value, int) else None
        if upper is not None and upper < frontier:
            upper = frontier
        self.logger.log_warning(
            f"R({query.a},{query.k},{query.c}): n={frontier} は探索できないため区間で報告します"
        )
        return RamseyResult(query, None, frontier, upper, witness, frontier, enumerated)

    def check_witness(self, col: ColoredHypergraph, k: int) -> Optional[bool]:
        """col が大きさ k の均質集合を持たなければ True

        探索ノード数が Settings.search_budget を超えた場合は None（判定不能）。
        """
        if k < 1:
            raise self._fail(f"k は 1 以上である必要があります: {k}")
        if k > col.n:
            return True
        try:
            found = find_homogeneous_subset(
                list(range(1, col.n + 1)),
                col.a,
                col.color,
                k,
                col.c,
                node_budget=self.settings.search_budget,
            )
        except BudgetExceededError as e:
            self.logger.log_warning(f"証拠の確認を打ち切りました: {e.message}")
            return None
        return found is None

    def random_coloring(self, n: int, a: int, c: int, seed: int) -> ColoredHypergraph:
        """seed から決定的に定まる一様乱数の彩色"""
        rng = np.random.default_rng(seed)
        return ColoredHypergraph(n, a, c, rng.integers(0, c, size=comb(n, a), dtype=np.int64))


def pentagon_coloring() -> ColoredHypergraph:
    """K_5 の五角形（RED）と五芒星（BLUE）による 2-彩色"""
    return ColoredHypergraph.from_function(
        5, 2, 2, lambda edge: RED if (edge[1] - edge[0]) in (1, 4) else BLUE
    )


def constant_coloring(n: int, a: int, c: int = 2, color: int = RED) -> ColoredHypergraph:
    return ColoredHypergraph.constant(n, a, c, color)


def brute_force_ramsey(query: RamseyQuery) -> RamseyResult:
    return RamseyVerifier().brute_force_ramsey(query)


def check_witness(col: ColoredHypergraph, k: int) -> Optional[bool]:
    return RamseyVerifier().check_witness(col, k)


def random_coloring(n: int, a: int, c: int, seed: int) -> ColoredHypergraph:
    return RamseyVerifier().random_coloring(n, a, c, seed)


def small_ramsey_table(
    queries: List[Tuple[int, int, int]], verifier: Optional[RamseyVerifier] = None
) -> List[RamseyResult]:
    """(a, k, c) の組ごとに全探索した結果の一覧"""
    verifier = verifier or RamseyVerifier()
    return [verifier.brute_force_ramsey(RamseyQuery(a, k, c)) for a, k, c in queries]
