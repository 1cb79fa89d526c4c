"""
JSDoc: 補題オラクルモジュール - 補題計算機
概要: 本ファイルは、文字列の長さ和（各記号の出現回数に上限がある全文字列の長さの総和）と部分彩色ハイパーグラフの辺数和について、厳密値・独立な列挙値・閉じた形の上界を計算し、証明中の恒等式（パスカルの第 2 恒等式、スターリングの評価）を確認するLemmaOracleクラスを提供します。
仕様: Python (PEP8準拠、type hint使用)
制限: 厳密値は多倍長整数、実数の上界は mpmath の区間演算で上側に丸める。列挙は Settings.enum_budget 以内
"""

from itertools import combinations, product
from math import comb, factorial
from typing import Iterable, List, Optional, Tuple

import mpmath
from mpmath import iv

from ..bound_calc.bound_calculator import BoundCalculator, REAL_DIGITS
from ..bound_calc.bound_expr import BoundExpr, BoundOverflow, Const, Power, Product, evaluate
from ..hypergraph_core.colored_hypergraph import find_homogeneous_subset
from ..utils.config import Settings, load_settings
from ..utils.errors import BudgetExceededError, InputError, LEM_001, LEM_002
from ..utils.logger import Logger

# 多項式 DP で厳密計算を許す c*k の上限
EXACT_SIZE_LIMIT = 64


class SigmaBound:
    """長さ和の閉じた形の上界

    Attributes:
        c, k (int): パラメータ
        value (mpmath.mpf): k^(3/2-c/2) c^(c(k-1)+2) B_c の上端
        part2_k (Optional[mpmath.mpf]): c = 2 での B_2 k^(1/2) 2^(2k)
        part2_k_minus_1 (Optional[mpmath.mpf]): c = 2 での B_2 (k-1)^(1/2) 2^(2k)
    """

    def __init__(self, c: int, k: int, value, part2_k=None, part2_k_minus_1=None) -> None:
        self.c = c
        self.k = k
        self.value = value
        self.part2_k = part2_k
        self.part2_k_minus_1 = part2_k_minus_1

    def __repr__(self) -> str:
        return f"SigmaBound(c={self.c}, k={self.k}, value={mpmath.nstr(self.value, 12)})"


class StirlingBracket:
    """スターリングの評価 sqrt(2πn)(n/e)^n <= n! <= e sqrt(n)(n/e)^n"""

    def __init__(self, n: int, lower, exact: int, upper, holds: bool) -> None:
        self.n = n
        self.lower = lower
        self.exact = exact
        self.upper = upper
        self.holds = holds

    def slack(self) -> float:
        """(upper - lower) / n!"""
        return float((self.upper - self.lower) / self.exact)

    def __repr__(self) -> str:
        return (
            f"StirlingBracket(n={self.n}, lower={mpmath.nstr(self.lower, 8)}, "
            f"exact={self.exact}, upper={mpmath.nstr(self.upper, 8)})"
        )


class LemmaRow:
    """lemma_table の 1 行"""

    def __init__(self, c: int, k: int, exact: int, bound) -> None:
        self.c = c
        self.k = k
        self.exact = exact
        self.bound = bound
        self.ratio = float(mpmath.mpf(exact) / bound) if bound else 0.0

    def as_text(self) -> str:
        return f"{self.c}\t{self.k}\t{self.exact}\t{mpmath.nstr(self.bound, 15)}\t{self.ratio:.6g}"


class LemmaOracle:
    """
    補題の厳密値と上界を計算するクラス

    Methods:
        sigma_sum_exact(c, k, symbol_cap, total_cap) -> int: 長さ和の厳密値
        sigma_count_exact(c, k, symbol_cap, total_cap) -> int: 対象文字列の個数
        sigma_sum_enumerated(c, k, symbol_cap, total_cap) -> int: 深さ優先列挙による長さ和
        sigma_bound(c, k) -> SigmaBound: 閉じた形の上界
        pascal_second_identity(a, n) -> Tuple[int, int, bool]: パスカルの第 2 恒等式
        stirling_bracket(n) -> StirlingBracket: スターリングの評価
        hyper_edge_sum_exact(a, c, k) -> int: 辺数和の厳密値（列挙）
        hyper_edge_sum_bound(a, c, k, r) -> int | BoundOverflow: 辺数和の上界
        lemma_table(c_values, k_values) -> List[LemmaRow]: 厳密値と上界の比較表
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
        self.logger.log_failure(message, LEM_001)
        return InputError(LEM_001, message)

    def _over_budget(self, message: str) -> BudgetExceededError:
        self.logger.log_failure(message, LEM_002)
        return BudgetExceededError(LEM_002, message)

    def _caps(self, c: int, k: int, symbol_cap: Optional[int]) -> int:
        if c < 1 or k < 1:
            raise self._fail(f"c >= 1, k >= 1 が必要です: c={c}, k={k}")
        cap = k - 1 if symbol_cap is None else symbol_cap
        if cap < 0:
            raise self._fail(f"出現回数の上限は非負である必要があります: {cap}")
        return cap

    def _length_counts(
        self, c: int, k: int, symbol_cap: Optional[int], total_cap: Optional[int]
    ) -> List[int]:
        """長さ J の対象文字列の個数 N_J の表

        記号を 1 つずつ加え、新しい記号 j 個の位置を C(J+j, j) 通りで配置する。
        """
        cap = self._caps(c, k, symbol_cap)
        if c * k > EXACT_SIZE_LIMIT:
            raise self._over_budget(
                f"c*k={c * k} が厳密計算の上限 {EXACT_SIZE_LIMIT} を超えました"
            )
        longest = c * cap if total_cap is None else min(c * cap, total_cap)
        ways = [1] + [0] * longest
        for _ in range(c):
            extended = [0] * (longest + 1)
            for length, count in enumerate(ways):
                if count == 0:
                    continue
                for j in range(0, min(cap, longest - length) + 1):
                    extended[length + j] += count * comb(length + j, j)
            ways = extended
        return ways

    def sigma_sum_exact(
        self,
        c: int,
        k: int,
        symbol_cap: Optional[int] = None,
        total_cap: Optional[int] = None,
    ) -> int:
        """各記号の出現が symbol_cap（既定 k-1）回以下の全文字列の長さの総和

        Σ (j_1+...+j_c) (j_1+...+j_c)! / (j_1!...j_c!) を出現回数でまとめて計算する。

        Raises:
            InputError: c < 1 または k < 1 の場合
            BudgetExceededError: c*k が上限を超えた場合
        """
        counts = self._length_counts(c, k, symbol_cap, total_cap)
        return sum(length * count for length, count in enumerate(counts))

    def sigma_count_exact(
        self,
        c: int,
        k: int,
        symbol_cap: Optional[int] = None,
        total_cap: Optional[int] = None,
    ) -> int:
        """対象文字列の個数"""
        return sum(self._length_counts(c, k, symbol_cap, total_cap))

    def sigma_sum_enumerated(
        self,
        c: int,
        k: int,
        symbol_cap: Optional[int] = None,
        total_cap: Optional[int] = None,
    ) -> int:
        """対象文字列を深さ優先で 1 つずつ列挙して長さを足し合わせる

        Raises:
            BudgetExceededError: 列挙数が Settings.enum_budget を超えた場合
        """
        cap = self._caps(c, k, symbol_cap)
        budget = self.settings.enum_budget
        visited = 0
        total = 0
        stack: List[Tuple[Tuple[int, ...], int]] = [((0,) * c, 0)]
        while stack:
            counts, length = stack.pop()
            visited += 1
            if visited > budget:
                raise self._over_budget(f"文字列の列挙数が上限 {budget} を超えました")
            total += length
            if total_cap is not None and length >= total_cap:
                continue
            for symbol in range(c):
                if counts[symbol] < cap:
                    grown = counts[:symbol] + (counts[symbol] + 1,) + counts[symbol + 1 :]
                    stack.append((grown, length + 1))
        self.logger.log_debug(f"文字列 {visited} 個を列挙しました (c={c}, k={k})")
        return total

    def sigma_bound(self, c: int, k: int) -> SigmaBound:
        """k^(3/2-c/2) c^(c(k-1)+2) (e/sqrt(2π))^(c+1) を上側に丸めて返す

        c = 2 では k^(1/2) 形と (k-1)^(1/2) 形の B_2 x 2^(2k) も併せて返す。

        Raises:
            InputError: c < 2 または k < 2 の場合
        """
        if c < 2 or k < 2:
            raise self._fail(f"sigma_bound には c >= 2, k >= 2 が必要です: c={c}, k={k}")
        previous = iv.dps
        iv.dps = REAL_DIGITS
        try:
            b = (iv.e / iv.sqrt(2 * iv.pi)) ** (c + 1)
            root = iv.sqrt(iv.mpf(k))
            power = root ** (3 - c) if c <= 3 else 1 / root ** (c - 3)
            value = power * iv.mpf(c) ** (c * (k - 1) + 2) * b
            part2_k = part2_k_minus_1 = None
            if c == 2:
                scale = b * iv.mpf(2) ** (2 * k)
                part2_k = mpmath.mpf((scale * iv.sqrt(k)).b)
                part2_k_minus_1 = mpmath.mpf((scale * iv.sqrt(k - 1)).b)
            return SigmaBound(c, k, mpmath.mpf(value.b), part2_k, part2_k_minus_1)
        finally:
            iv.dps = previous

    def pascal_second_identity(self, a: int, n: int) -> Tuple[int, int, bool]:
        """Σ_{b=0}^{n} C(a+b, b) と C(a+n+1, n) を厳密に計算する"""
        if a < 0 or n < 0:
            raise self._fail(f"a >= 0, n >= 0 が必要です: a={a}, n={n}")
        lhs = sum(comb(a + b, b) for b in range(n + 1))
        rhs = comb(a + n + 1, n)
        return lhs, rhs, lhs == rhs

    def stirling_bracket(self, n: int) -> StirlingBracket:
        """sqrt(2πn)(n/e)^n <= n! <= n^n sqrt(n) e^(1-n) を区間演算で確かめる

        下側は区間の上端、上側は区間の下端で比較する。
        """
        if n < 1:
            raise self._fail(f"n >= 1 が必要です: n={n}")
        previous = iv.dps
        iv.dps = REAL_DIGITS
        try:
            x = iv.mpf(n)
            lower = iv.sqrt(2 * iv.pi * x) * (x / iv.e) ** n
            upper = x ** n * iv.sqrt(x) * iv.exp(1 - x)
            exact = factorial(n)
            holds = bool(mpmath.mpf(lower.b) <= exact <= mpmath.mpf(upper.a))
            return StirlingBracket(n, mpmath.mpf(lower.mid), exact, mpmath.mpf(upper.mid), holds)
        finally:
            iv.dps = previous

    def hyper_edge_sum_exact(self, a: int, c: int, k: int) -> int:
        """(a-2)-均質な k-1 点集合を持たない {1..m} 上の c-彩色完全 (a-2)-ハイパーグラフの辺数の総和

        m = 0, 1, ... の順に全彩色を列挙し、対象となる彩色が無くなった m で止める。

        Raises:
            InputError: a < 3、c < 2、k < 2 の場合
            BudgetExceededError: 列挙数が Settings.enum_budget を超える場合
        """
        if a < 3 or c < 2 or k < 2:
            raise self._fail(f"a >= 3, c >= 2, k >= 2 が必要です: a={a}, c={c}, k={k}")
        u = a - 2
        budget = self.settings.enum_budget
        enumerated = 0
        total = 0
        m = 0
        while True:
            edges = list(combinations(range(1, m + 1), u))
            graphs = c ** len(edges)
            enumerated += graphs
            if enumerated > budget:
                raise self._over_budget(
                    f"m={m} で列挙数 {enumerated} が上限 {budget} を超えました"
                )
            qualifying = 0
            for colors in product(range(c), repeat=len(edges)):
                table = dict(zip(edges, colors))
                found = find_homogeneous_subset(
                    list(range(1, m + 1)), u, table.get, k - 1, c
                )
                if found is None:
                    qualifying += 1
            self.logger.log_debug(f"m={m}: {graphs} 個中 {qualifying} 個が対象")
            if qualifying == 0:
                return total
            total += qualifying * len(edges)
            m += 1

    def hyper_edge_sum_bound(
        self, a: int, c: int, k: int, r: Optional[int] = None
    ) -> "int | BoundOverflow":
        """r^(a-1) c^(r^(a-2)) を厳密に評価する

        r を省略した場合は R(a-2, k-1, c) の代用値を使う。

        Returns:
            int | BoundOverflow: 値、またはビット予算超過の報告
        """
        if a < 3 or c < 2 or k < 2:
            raise self._fail(f"a >= 3, c >= 2, k >= 2 が必要です: a={a}, c={c}, k={k}")
        if r is None:
            expr_r, value, _ = self.calculator.ramsey_upper(a - 2, k - 1, c)
            r_expr: BoundExpr = Const(value) if isinstance(value, int) else expr_r
        else:
            if r < 1:
                raise self._fail(f"r は正である必要があります: {r}")
            r_expr = Const(r)
        expr = Product((Power(r_expr, Const(a - 1)), Power(Const(c), Power(r_expr, Const(a - 2)))))
        return evaluate(expr, self.settings.bit_budget)

    def lemma_table(self, c_values: Iterable[int], k_values: Iterable[int]) -> List[LemmaRow]:
        """(c, k, 厳密値, 上界, 比) の表を作る"""
        ks = list(k_values)
        rows = []
        for c in c_values:
            for k in ks:
                rows.append(LemmaRow(c, k, self.sigma_sum_exact(c, k), self.sigma_bound(c, k).value))
        self.logger.log_info(f"補題の比較表を {len(rows)} 行作成しました")
        return rows


def sigma_sum_exact(c: int, k: int, total_cap: Optional[int] = None) -> int:
    return LemmaOracle().sigma_sum_exact(c, k, total_cap=total_cap)


def sigma_sum_enumerated(c: int, k: int, total_cap: Optional[int] = None) -> int:
    return LemmaOracle().sigma_sum_enumerated(c, k, total_cap=total_cap)


def sigma_bound(c: int, k: int) -> SigmaBound:
    return LemmaOracle().sigma_bound(c, k)


def pascal_second_identity(a: int, n: int) -> Tuple[int, int, bool]:
    return LemmaOracle().pascal_second_identity(a, n)


def stirling_bracket(n: int) -> StirlingBracket:
    return LemmaOracle().stirling_bracket(n)


def hyper_edge_sum_exact(a: int, c: int, k: int) -> int:
    return LemmaOracle().hyper_edge_sum_exact(a, c, k)


def hyper_edge_sum_bound(a: int, c: int, k: int, r: Optional[int] = None) -> "int | BoundOverflow":
    return LemmaOracle().hyper_edge_sum_bound(a, c, k, r)

