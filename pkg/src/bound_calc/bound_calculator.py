"""
JSDoc: 上界計算モジュール - 上界計算機
概要: 本ファイルは、上矢印記法・TOW の厳密評価、TOW 補題の各恒等式の両辺評価、3 系統の証明（Ramsey / Erdős–Rado / CFS）が与える上界式の構築と評価、及び全系統の比較を行うBoundCalculatorクラスを提供します。
仕様: Python (PEP8準拠、type hint使用)
制限: 厳密評価は Settings.bit_budget（環境変数 RAMSEY_BIT_BUDGET）以内に限る。実数の引数は区間演算で上に丸める
"""

from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import mpmath
from mpmath import iv
from typing_extensions import Literal

from .bound_expr import (
    Binomial,
    BoundExpr,
    BoundOverflow,
    CeilReal,
    Const,
    Factorial,
    Power,
    Product,
    Quotient,
    Sum,
    Tow,
    TowerMagnitude,
    UpArrow,
    evaluate,
    magnitude,
    tow_expr,
)
from ..utils.config import Settings, load_settings
from ..utils.errors import InputError, BND_001, BND_002, BND_003
from ..utils.logger import Logger

Family = Literal["base", "ramsey", "erdos_rado", "erdos_rado_tower", "cfs", "cfs_tower"]
FAMILIES: Tuple[str, ...] = (
    "base",
    "ramsey",
    "erdos_rado",
    "erdos_rado_tower",
    "cfs",
    "cfs_tower",
)
ExactOrOverflow = Union[int, BoundOverflow]

# B_c などの実定数の精度（10 進桁）
REAL_DIGITS = 30


def bound_constant(c: int) -> mpmath.mpf:
    """B_c = (e / sqrt(2π))^(c+1) を 30 桁で返す"""
    with mpmath.mp.workdps(REAL_DIGITS):
        return +((mpmath.e / mpmath.sqrt(2 * mpmath.pi)) ** (c + 1))


def _ceil_upper(build) -> int:
    """区間演算で式を評価し、上端を切り上げた整数を返す"""
    previous = iv.dps
    iv.dps = REAL_DIGITS
    try:
        interval = build()
        return int(mpmath.ceil(mpmath.mpf(interval.b)))
    finally:
        iv.dps = previous


def _b_interval(c: int):
    return (iv.e / iv.sqrt(2 * iv.pi)) ** (c + 1)


class FamilyBound:
    """ある証明系統の上界

    Attributes:
        family (str): 系統名
        a, k, c (int): パラメータ
        expr (BoundExpr): 記号式
        value (int | BoundOverflow): 厳密値または超過報告
        magnitude (TowerMagnitude): 大きさの見積もり
        upper_of_upper (bool): 真の Ramsey 数の代わりに上界を代入したか
        asymptotic (bool): 「ほとんどすべての k」でのみ成り立つ式を小さな k で評価したか
        notes (List[str]): 注記
    """

    def __init__(
        self,
        family: str,
        a: int,
        k: int,
        c: int,
        expr: BoundExpr,
        value: ExactOrOverflow,
        upper_of_upper: bool = False,
        asymptotic: bool = False,
        notes: Optional[List[str]] = None,
    ) -> None:
        self.family = family
        self.a = a
        self.k = k
        self.c = c
        self.expr = expr
        self.value = value
        self.magnitude = (
            value.magnitude if isinstance(value, BoundOverflow) else TowerMagnitude.of_int(value)
        )
        self.upper_of_upper = upper_of_upper
        self.asymptotic = asymptotic
        self.notes = notes or []

    @property
    def exact(self) -> bool:
        return isinstance(self.value, int)

    def flags(self) -> List[str]:
        flags = []
        if self.upper_of_upper:
            flags.append("upper bound of an upper bound")
        if self.asymptotic:
            flags.append("asymptotic only")
        return flags

    def __repr__(self) -> str:
        return f"FamilyBound({self.family}, a={self.a}, k={self.k}, c={self.c}, {self.expr})"


class IdentityCheck:
    """TOW 補題の恒等式 1 件の評価結果

    Attributes:
        part (int): 恒等式の番号 1..7
        lhs, rhs (int | BoundOverflow): 両辺の値
        relation (str): "=" または "<="
        holds (Optional[bool]): 成立したか（どちらかが超過した場合は None）
    """

    def __init__(self, part: int, lhs: ExactOrOverflow, rhs: ExactOrOverflow, relation: str) -> None:
        self.part = part
        self.lhs = lhs
        self.rhs = rhs
        self.relation = relation
        if isinstance(lhs, int) and isinstance(rhs, int):
            self.holds: Optional[bool] = lhs == rhs if relation == "=" else lhs <= rhs
        else:
            self.holds = None

    def __repr__(self) -> str:
        return f"IdentityCheck(part={self.part}, relation={self.relation!r}, holds={self.holds})"


class BoundCalculator:
    """上界の記号式を構築・評価するクラス

    Methods:
        up_arrow(c, a, k) -> int | BoundOverflow: c ↑^a k
        tow(args, c) -> int | BoundOverflow: TOW_c(args)
        tow_identity(part, bindings) -> IdentityCheck: TOW 補題の恒等式
        bound(family, a, k, c) -> FamilyBound: 系統ごとの上界
        ramsey_upper(a, k, c) -> Tuple[BoundExpr, ExactOrOverflow, bool]: 漸化式に代入する R の代用値
        compare_bounds(a, k, c) -> List[FamilyBound]: 適用可能な全系統の比較
    """

    def __init__(self, settings: Optional[Settings] = None, logger: Optional[Logger] = None) -> None:
        self.settings = settings or load_settings()
        self.logger = logger or Logger(self.settings.log_level)
        self._surrogates: Dict[Tuple[int, int, int], Tuple[BoundExpr, ExactOrOverflow, bool]] = {}

    @property
    def bit_budget(self) -> int:
        return self.settings.bit_budget

    def _fail(self, code: str, message: str) -> InputError:
        self.logger.log_failure(message, code)
        return InputError(code, message)

    def evaluate(self, expr: BoundExpr) -> ExactOrOverflow:
        value = evaluate(expr, self.bit_budget)
        if isinstance(value, BoundOverflow):
            self.logger.log_debug(f"ビット予算 {self.bit_budget} を超えました: {value}")
        return value

    # --- 記法 ---

    def up_arrow(self, c: int, a: int, k: int) -> ExactOrOverflow:
        """c ↑^a k を評価する（a=0: ck, a=1: c^k, k=0: 1, それ以外は漸化式）

        Raises:
            InputError: c < 2、a < 0、k < 0 の場合
        """
        if c < 2 or a < 0 or k < 0:
            raise self._fail(BND_002, f"上矢印の引数が不正です: c={c}, a={a}, k={k}")
        return self.evaluate(UpArrow(c, a, k))

    def tow(self, args: Sequence[int], c: int = 2) -> ExactOrOverflow:
        """TOW_c(b_1, ..., b_L) を評価する（c 省略時は 2）

        Raises:
            InputError: 引数が空、または正でない値を含む場合
        """
        if c < 2 or not args or any(int(b) < 1 for b in args):
            raise self._fail(BND_002, f"TOW の引数が不正です: c={c}, args={tuple(args)}")
        return self.evaluate(tow_expr(c, tuple(int(b) for b in args)))

    def tow_identity(self, part: int, bindings: Mapping[str, object]) -> IdentityCheck:
        """TOW 補題の恒等式の両辺を厳密に評価する

        bindings のキー: args（b_1..b_L）、b、delta（自然数）、i（1 の番号、1 始まり）、count（7 の 1 の個数）。
        2, 5, 7 は等号、1, 3, 4, 6 は <= を判定する。

        Raises:
            InputError: 番号や束縛が不正な場合
        """
        try:
            args = tuple(int(x) for x in bindings.get("args", ()))  # type: ignore[union-attr]
            b = int(bindings.get("b", 1))  # type: ignore[arg-type]
            delta = int(bindings.get("delta", 0))  # type: ignore[arg-type]
            i = int(bindings.get("i", 1))  # type: ignore[arg-type]
            count = int(bindings.get("count", len(args)))  # type: ignore[arg-type]
        except (TypeError, ValueError) as e:
            raise self._fail(BND_003, f"恒等式の束縛が不正です: {e}")
        if part != 7 and (not args or any(x < 1 for x in args)):
            raise self._fail(BND_003, f"恒等式 {part} には正の args が必要です: {args}")
        if b < 1 or delta < 0:
            raise self._fail(BND_003, f"b >= 1, delta >= 0 が必要です: b={b}, delta={delta}")

        base = tow_expr(2, args) if args else None
        raised = list(args)
        if raised:
            raised[0] *= b
            raised[-1] += delta

        if part == 1:
            if not 1 <= i <= len(args) - 1:
                raise self._fail(BND_003, f"恒等式 1 には 1 <= i <= L-1 が必要です: i={i}")
            prefix = tuple(Const(x) for x in args[: i - 1])
            b_i, b_next = args[i - 1], args[i]
            rest = args[i + 1 :]
            tail: BoundExpr = tow_expr(2, rest) if rest else Const(1)
            shared = Power(Const(2), Product((Const(b_next), tail)))
            # TOW(b_i, b_{i+1}, ...) と TOW(1, b_{i+1} + lg b_i, ...) の部分塔の指数
            lhs_expr: BoundExpr = Tow(2, prefix + (Product((Const(b_i), shared)),))
            rhs_expr: BoundExpr = Tow(2, prefix + (Product((shared, Power(Const(b_i), tail))),))
            relation = "<="
        elif part == 2:
            lhs_expr = Power(base, Const(b))
            rhs_expr = tow_expr(2, (b * args[0],) + args[1:])
            relation = "="
        elif part == 3:
            lhs_expr = Product((Const(1 + delta), base))
            rhs_expr = tow_expr(2, args[:-1] + (args[-1] + delta,))
            relation = "<="
        elif part == 4:
            lhs_expr = Product((Const(1 + delta), Power(base, Const(b))))
            rhs_expr = tow_expr(2, tuple(raised))
            relation = "<="
        elif part == 5:
            lhs_expr = Power(Const(2), base)
            rhs_expr = tow_expr(2, (1,) + args)
            relation = "="
        elif part == 6:
            lhs_expr = Power(Const(2), Product((Const(1 + delta), Power(base, Const(b)))))
            rhs_expr = tow_expr(2, (1,) + tuple(raised))
            relation = "<="
        elif part == 7:
            if count < 1:
                raise self._fail(BND_003, f"恒等式 7 には count >= 1 が必要です: {count}")
            return IdentityCheck(7, self._iterated_lg_of_ones(count), 1, "=")
        else:
            raise self._fail(BND_003, f"恒等式の番号は 1..7 です: {part}")

        check = IdentityCheck(part, self.evaluate(lhs_expr), self.evaluate(rhs_expr), relation)
        if check.holds is False:
            self.logger.log_warning(f"恒等式 {part} が成り立ちません: {dict(bindings)}")
        return check

    def _iterated_lg_of_ones(self, count: int) -> ExactOrOverflow:
        value = self.evaluate(tow_expr(2, (1,) * count))
        if not isinstance(value, int):
            return value
        for _ in range(count):
            exponent = value.bit_length() - 1
            if value != 1 << exponent:
                raise self._fail(BND_003, "2 の冪でない値に lg を適用しました")
            value = exponent
        return value

    # --- 上界の系統 ---

    def ramsey_upper(self, a: int, k: int, c: int) -> Tuple[BoundExpr, ExactOrOverflow, bool]:
        """漸化式で R(a,k,c) の代わりに使う値

        自明に確定する値（k <= a なら k、a = 1 なら ck-c+1）は厳密値、それ以外は
        各系統の上界のうち最小のもの。

        Returns:
            Tuple[BoundExpr, ExactOrOverflow, bool]: (式, 値, 真の値か)
        """
        key = (a, k, c)
        if key in self._surrogates:
            return self._surrogates[key]
        if k <= a or k <= 1:
            result: Tuple[BoundExpr, ExactOrOverflow, bool] = (Const(max(k, 0)), max(k, 0), True)
        elif a == 1:
            value = c * k - c + 1
            result = (Const(value), value, True)
        else:
            candidates = [self.bound(f, a, k, c) for f in self._recurrence_families(a)]
            best = min(candidates, key=lambda fb: fb.magnitude.sort_key())
            exact_values = [fb for fb in candidates if fb.exact]
            if exact_values:
                best = min(exact_values, key=lambda fb: fb.value)  # type: ignore[arg-type,return-value]
            result = (best.expr, best.value, False)
        self._surrogates[key] = result
        return result

    def _recurrence_families(self, a: int) -> List[str]:
        families = ["ramsey", "erdos_rado"]
        if a == 2:
            families.insert(0, "base")
        if a >= 3:
            families.append("cfs")
        return families

    def _surrogate_node(self, a: int, k: int, c: int) -> Tuple[BoundExpr, bool]:
        expr, value, exact = self.ramsey_upper(a, k, c)
        if isinstance(value, int):
            return Const(value), exact
        return expr, exact

    def bound(self, family: str, a: int, k: int, c: int = 2) -> FamilyBound:
        """系統 family が与える R(a,k,c) の上界

        Raises:
            InputError: 系統とパラメータの組合せが不正な場合
        """
        if family not in FAMILIES:
            raise self._fail(BND_001, f"未知の上界系統です: {family}")
        if a < 1 or c < 2 or k < a:
            raise self._fail(BND_001, f"a >= 1, k >= a, c >= 2 が必要です: a={a}, k={k}, c={c}")
        builder = getattr(self, f"_family_{family}")
        result: FamilyBound = builder(a, k, c)
        self.logger.log_debug(f"{family}(a={a}, k={k}, c={c}) = {result.expr}")
        return result

    def _family_base(self, a: int, k: int, c: int) -> FamilyBound:
        if a == 1:
            expr: BoundExpr = Const(c * k - c + 1)
            return FamilyBound("base", a, k, c, expr, self.evaluate(expr))
        if a != 2:
            raise self._fail(BND_001, f"base 系統は a <= 2 のみです: a={a}")
        if c == 2:
            expr = Binomial(Const(2 * k - 2), k - 1)
        else:
            expr = Quotient(
                Factorial(Const(c * (k - 1))), Power(Factorial(Const(k - 1)), Const(c))
            )
        return FamilyBound("base", a, k, c, expr, self.evaluate(expr))

    def _family_ramsey(self, a: int, k: int, c: int) -> FamilyBound:
        if a < 2:
            raise self._fail(BND_001, "ramsey 系統は a >= 2 が必要です")
        expr = UpArrow(c, a - 1, c * k - c + 1)
        return FamilyBound("ramsey", a, k, c, expr, self.evaluate(expr))

    def _family_erdos_rado(self, a: int, k: int, c: int) -> FamilyBound:
        if a < 2:
            raise self._fail(BND_001, "erdos_rado 系統は a >= 2 が必要です")
        r, exact = self._surrogate_node(a - 1, k - 1, c)
        if a == 3:
            expr: BoundExpr = Sum((Power(Const(c), Power(r, Const(2))), Const(1)))
        else:
            expr = Sum(
                (Power(Const(c), Binomial(Sum((r, Const(1))), a - 1)), Const(a - 2))
            )
        notes = [] if exact else [f"R({a - 1},{k - 1},{c}) を上界で置き換えました"]
        return FamilyBound(
            "erdos_rado", a, k, c, expr, self.evaluate(expr), upper_of_upper=not exact, notes=notes
        )

    def _family_erdos_rado_tower(self, a: int, k: int, c: int) -> FamilyBound:
        if c != 2:
            raise self._fail(BND_001, "erdos_rado_tower 系統は c = 2 のみです（O(c) 項を含むため）")
        if a < 3 or (a == 3 and k < 3):
            raise self._fail(BND_001, f"erdos_rado_tower 系統は a >= 3 かつ k >= 3 が必要です: a={a}, k={k}")
        top = _ceil_upper(
            lambda: 4 * k - iv.log(iv.mpf(k - a + 1)) / iv.log(2) - 4 * (a - 3)
        )
        label = f"4k-lg(k-{a - 1})" + (f"-{4 * (a - 3)}" if a > 3 else "")
        args = (Const(1),) + tuple(Const(x) for x in range(a - 1, 2, -1)) + (CeilReal(label, top),)
        expr = Tow(2, args)
        asymptotic = a >= 4 and k < a + self.settings.asymptotic_margin
        return FamilyBound(
            "erdos_rado_tower", a, k, c, expr, self.evaluate(expr), asymptotic=asymptotic
        )

    def _family_cfs(self, a: int, k: int, c: int) -> FamilyBound:
        if a < 3:
            raise self._fail(BND_001, f"cfs 系統は a >= 3 が必要です: a={a}")
        if a == 3:
            exponent = _ceil_upper(lambda: _b_interval(c) * iv.sqrt(k - 1) * iv.mpf(c) ** (c * k))
            expr: BoundExpr = Power(Const(c), CeilReal(f"B_{c}·(k-1)^(1/2)·{c}^({c}k)", exponent))
            return FamilyBound("cfs", a, k, c, expr, self.evaluate(expr))
        r, exact = self._surrogate_node(a - 2, k - 1, c)
        expr = Power(
            Const(c),
            Product((Power(r, Const(a - 1)), Power(Const(c), Power(r, Const(a - 2))))),
        )
        notes = [] if exact else [f"R({a - 2},{k - 1},{c}) を上界で置き換えました"]
        return FamilyBound(
            "cfs", a, k, c, expr, self.evaluate(expr), upper_of_upper=not exact, notes=notes
        )

    def _family_cfs_tower(self, a: int, k: int, c: int) -> FamilyBound:
        if a < 3:
            raise self._fail(BND_001, f"cfs_tower 系統は a >= 3 が必要です: a={a}")
        if a == 3:
            first = _ceil_upper(lambda: _b_interval(c) * iv.sqrt(k - 1))
            args: Tuple[BoundExpr, ...] = (
                CeilReal(f"B_{c}·(k-1)^(1/2)", first),
                Power(Const(c), Const(c * k)),
            )
        else:
            shift = k - a + 2
            scaled = _ceil_upper(lambda: 3 * _b_interval(c) * iv.sqrt(shift))
            args = (
                (Const(1),)
                + tuple(Const(x) for x in range(a - 1, 3, -1))
                + (
                    CeilReal(f"3·B_{c}·(k-{a - 2})^(1/2)", scaled),
                    Power(Const(c), Const(c * k - a * c + 3 * c)),
                )
            )
        expr = Tow(c, args)
        asymptotic = a >= 6 and k < a + self.settings.asymptotic_margin
        return FamilyBound("cfs_tower", a, k, c, expr, self.evaluate(expr), asymptotic=asymptotic)

    def applicable_families(self, a: int, k: int, c: int) -> List[str]:
        """(a, k, c) に適用できる系統の一覧"""
        if a == 1:
            return ["base"]
        if a == 2:
            return ["base", "ramsey", "erdos_rado"]
        families = ["ramsey", "erdos_rado"]
        if c == 2 and (a > 3 or k >= 3):
            families.append("erdos_rado_tower")
        families += ["cfs", "cfs_tower"]
        return families

    def compare_bounds(self, a: int, k: int, c: int = 2) -> List[FamilyBound]:
        """適用可能な全系統の上界を大きさ順に並べる

        大きさは塔の高さ、次に最上段の値で比べる。
        """
        bounds = [self.bound(f, a, k, c) for f in self.applicable_families(a, k, c)]
        bounds.sort(key=lambda fb: (fb.magnitude.sort_key(), FAMILIES.index(fb.family)))
        self.logger.log_info(
            f"上界の比較 (a={a}, k={k}, c={c}): " + " < ".join(fb.family for fb in bounds)
        )
        return bounds


def up_arrow(c: int, a: int, k: int) -> ExactOrOverflow:
    return BoundCalculator().up_arrow(c, a, k)


def tow(args: Sequence[int], c: int = 2) -> ExactOrOverflow:
    return BoundCalculator().tow(args, c)


def tow_identity(part: int, bindings: Mapping[str, object]) -> IdentityCheck:
    return BoundCalculator().tow_identity(part, bindings)


def bound(family: str, a: int, k: int, c: int = 2) -> FamilyBound:
    return BoundCalculator().bound(family, a, k, c)


def compare_bounds(a: int, k: int, c: int = 2) -> List[FamilyBound]:
    return BoundCalculator().compare_bounds(a, k, c)
