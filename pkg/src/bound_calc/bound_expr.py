"""
JSDoc: 上界計算モジュール - 記号式
概要: 本ファイルは、上界を表す記号式BoundExpr（上矢印・TOW・二項係数などの合成）、巨大な値の大きさを塔の高さで表すTowerMagnitude、ビット予算付きの厳密評価、及び式の描画を提供します。
仕様: Python (PEP8準拠、type hint使用)
制限: TowerMagnitude は順序付けと大きさ表示のための近似値であり、厳密な不等式の判定には使わない
"""

from dataclasses import dataclass
from math import comb, factorial, inf, lgamma, log, log2
from typing import Optional, Tuple, Union

from typing_extensions import Literal

RenderStyle = Literal["decimal", "tower", "structured"]

# top をこの値以下に正規化する
TOP_LIMIT = 64.0
# as_int で整数に戻す上限
SMALL_INT_LIMIT = 10 ** 6


@dataclass(frozen=True)
class TowerMagnitude:
    """巨大な値の大きさ

    値は 2^(2^(...2^top)) のように 2 の冪を height 回適用したものとして表す。

    Attributes:
        height (Optional[int]): 2 の冪の段数（None は塔表記で表せない大きさ）
        top (float): 最上段の値（height >= 1 なら 64 以下）
    """

    height: Optional[int]
    top: float

    @classmethod
    def beyond(cls) -> "TowerMagnitude":
        return cls(None, 0.0)

    @classmethod
    def of_int(cls, value: int) -> "TowerMagnitude":
        if value <= TOP_LIMIT:
            return cls(0, float(value))
        return cls.from_lg(_lg_int(value))

    @classmethod
    def from_lg(cls, lg_value: float) -> "TowerMagnitude":
        """log2 の値から大きさを作る"""
        if lg_value <= log2(TOP_LIMIT):
            return cls(0, 2.0 ** lg_value)
        return cls(1, lg_value).normalized()

    def normalized(self) -> "TowerMagnitude":
        if self.height is None:
            return self
        height, top = self.height, self.top
        while top > TOP_LIMIT:
            top = log2(top)
            height += 1
        while height > 0 and top <= log2(TOP_LIMIT):
            top = 2.0 ** top
            height -= 1
        return TowerMagnitude(height, top)

    def lg_float(self) -> float:
        """log2(値) を浮動小数で返す（表せない場合は inf）"""
        if self.height is None:
            return inf
        if self.height == 0:
            return log2(self.top) if self.top > 0 else -inf
        if self.height == 1:
            return self.top
        if self.height == 2:
            return 2.0 ** self.top
        return inf

    def lg(self) -> "TowerMagnitude":
        if self.height is None:
            return self
        if self.height == 0:
            return TowerMagnitude(0, self.lg_float())
        return TowerMagnitude(self.height - 1, self.top).normalized()

    def exp2(self) -> "TowerMagnitude":
        if self.height is None:
            return self
        if self.height == 0:
            return TowerMagnitude.from_lg(self.top)
        return TowerMagnitude(self.height + 1, self.top).normalized()

    def as_int(self) -> Optional[int]:
        """SMALL_INT_LIMIT 以下なら近似整数を返す"""
        lg_value = self.lg_float()
        if lg_value == inf or lg_value > log2(SMALL_INT_LIMIT):
            return None
        return int(round(2.0 ** lg_value))

    def sort_key(self) -> Tuple[int, int, float]:
        if self.height is None:
            return (1, 0, 0.0)
        return (0, self.height, self.top)

    def bits(self) -> float:
        """値のビット長の目安"""
        return max(self.lg_float(), 0.0)

    def __str__(self) -> str:
        if self.height is None:
            return "beyond tower notation"
        if self.height == 0:
            return f"{self.top:.6g}"
        return f"2^^{self.height} ({self.top:.4f})"


def _lg_int(value: int) -> float:
    if value <= 0:
        return -inf
    length = value.bit_length()
    if length < 1000:
        return log2(value)
    return log2(value >> (length - 53)) + (length - 53)


def _mul(m1: TowerMagnitude, m2: TowerMagnitude) -> TowerMagnitude:
    l1, l2 = m1.lg_float(), m2.lg_float()
    if l1 != inf and l2 != inf:
        return TowerMagnitude.from_lg(l1 + l2)
    return max(m1, m2, key=TowerMagnitude.sort_key)


def _add(m1: TowerMagnitude, m2: TowerMagnitude) -> TowerMagnitude:
    l1, l2 = m1.lg_float(), m2.lg_float()
    if l1 != inf and l2 != inf:
        high, low = max(l1, l2), min(l1, l2)
        if high == -inf:
            return TowerMagnitude(0, 0.0)
        return TowerMagnitude.from_lg(high + log2(1.0 + 2.0 ** (low - high)))
    return max(m1, m2, key=TowerMagnitude.sort_key)


def _pow(base: TowerMagnitude, exponent: TowerMagnitude) -> TowerMagnitude:
    if base.height == 0 and base.top <= 1.0:
        return base
    return _mul(exponent, base.lg()).exp2()


class BoundExpr:
    """上界の記号式の基底クラス"""

    def __str__(self) -> str:
        return render(self, "structured")


@dataclass(frozen=True)
class Const(BoundExpr):
    value: int


@dataclass(frozen=True)
class CeilReal(BoundExpr):
    """実数値の式を上に丸めた整数（区間演算で厳密に求めた上端の切り上げ）"""

    label: str
    value: int


@dataclass(frozen=True)
class UpArrow(BoundExpr):
    """c ↑^level height"""

    c: int
    level: int
    height: int


@dataclass(frozen=True)
class Tow(BoundExpr):
    """TOW_c(b_1, ..., b_L)"""

    c: int
    args: Tuple[BoundExpr, ...]


@dataclass(frozen=True)
class Binomial(BoundExpr):
    top: BoundExpr
    bottom: int


@dataclass(frozen=True)
class Factorial(BoundExpr):
    arg: BoundExpr


@dataclass(frozen=True)
class Quotient(BoundExpr):
    """切り上げ除算"""

    numerator: BoundExpr
    denominator: BoundExpr


@dataclass(frozen=True)
class Power(BoundExpr):
    base: BoundExpr
    exponent: BoundExpr


@dataclass(frozen=True)
class Sum(BoundExpr):
    terms: Tuple[BoundExpr, ...]


@dataclass(frozen=True)
class Product(BoundExpr):
    terms: Tuple[BoundExpr, ...]


def const(value: int) -> Const:
    return Const(value)


def tow_expr(c: int, args: Tuple[int, ...]) -> Tow:
    """整数引数の TOW 式を作る"""
    return Tow(c, tuple(Const(b) for b in args))


def to_tower(expr: BoundExpr) -> BoundExpr:
    """上矢印 1 段・2 段を TOW 形式に書き換える"""
    if isinstance(expr, UpArrow):
        if expr.level == 2 and expr.height >= 1:
            return tow_expr(expr.c, (1,) * expr.height)
        if expr.level == 1:
            return tow_expr(expr.c, (expr.height,))
    return expr


# --- 大きさの見積もり ---


def _up_magnitude(c: int, level: int, height: int) -> TowerMagnitude:
    if level == 0:
        return TowerMagnitude.of_int(c * height)
    if level == 1:
        return TowerMagnitude.from_lg(height * log2(c))
    if height == 0:
        return TowerMagnitude.of_int(1)
    base = TowerMagnitude.of_int(c)
    value = TowerMagnitude.of_int(1)
    for step in range(height):
        if level == 2:
            value = _pow(base, value)
            if value.height is not None and value.height >= 4:
                # 以降は 1 段ごとに高さが 1 増えるだけ
                return TowerMagnitude(value.height + height - step - 1, value.top)
        else:
            inner = value.as_int()
            if inner is None:
                return TowerMagnitude.beyond()
            value = _up_magnitude(c, level - 1, inner)
    return value


def magnitude(expr: BoundExpr) -> TowerMagnitude:
    """式の値の大きさを見積もる"""
    if isinstance(expr, (Const, CeilReal)):
        return TowerMagnitude.of_int(expr.value)
    if isinstance(expr, UpArrow):
        return _up_magnitude(expr.c, expr.level, expr.height)
    if isinstance(expr, Tow):
        base = TowerMagnitude.of_int(expr.c)
        value = _pow(base, magnitude(expr.args[-1]))
        for arg in reversed(expr.args[:-1]):
            value = _pow(base, _mul(magnitude(arg), value))
        return value
    if isinstance(expr, Power):
        return _pow(magnitude(expr.base), magnitude(expr.exponent))
    if isinstance(expr, Sum):
        total = TowerMagnitude(0, 0.0)
        for term in expr.terms:
            total = _add(total, magnitude(term))
        return total
    if isinstance(expr, Product):
        total = TowerMagnitude(0, 1.0)
        for term in expr.terms:
            total = _mul(total, magnitude(term))
        return total
    if isinstance(expr, Binomial):
        top = magnitude(expr.top)
        if top.height == 0:
            n, r = top.top, expr.bottom
            if r > n:
                return TowerMagnitude(0, 0.0)
            lg_value = (lgamma(n + 1) - lgamma(r + 1) - lgamma(n - r + 1)) / log(2)
            return TowerMagnitude.from_lg(lg_value)
        return _pow(top, TowerMagnitude.of_int(expr.bottom))
    if isinstance(expr, Factorial):
        arg = magnitude(expr.arg)
        if arg.height == 0:
            return TowerMagnitude.from_lg(lgamma(arg.top + 1) / log(2))
        return _pow(arg, arg)
    if isinstance(expr, Quotient):
        num, den = magnitude(expr.numerator), magnitude(expr.denominator)
        l1, l2 = num.lg_float(), den.lg_float()
        if l1 != inf and l2 != inf:
            return TowerMagnitude.from_lg(max(l1 - l2, 0.0))
        return num
    raise TypeError(f"未対応の式です: {expr!r}")


# --- 厳密評価 ---


class BoundOverflow:
    """ビット予算を超えたため厳密評価しなかった値の報告

    Attributes:
        expr (BoundExpr): 評価対象の式
        magnitude (TowerMagnitude): 大きさの見積もり
        bit_budget (int): 適用したビット予算
    """

    def __init__(self, expr: BoundExpr, magnitude: TowerMagnitude, bit_budget: int) -> None:
        self.expr = expr
        self.magnitude = magnitude
        self.bit_budget = bit_budget

    def __repr__(self) -> str:
        return f"BoundOverflow({render(self.expr, 'structured')}, {self.magnitude})"

    def __str__(self) -> str:
        return (
            f"overflow: {render(self.expr, 'tower')} ~ {self.magnitude} "
            f"(> {self.bit_budget} bits)"
        )


class _Overflow(Exception):
    pass


def _checked_pow(base: int, exponent: int, budget: int) -> int:
    if base in (0, 1) or exponent == 0:
        return base ** exponent
    if exponent > budget or exponent * log2(base) > budget:
        raise _Overflow()
    return base ** exponent


def _checked(value: int, budget: int) -> int:
    if value.bit_length() > budget:
        raise _Overflow()
    return value


def _up_exact(c: int, level: int, height: int, budget: int) -> int:
    if level == 0:
        return _checked(c * height, budget)
    if level == 1:
        return _checked_pow(c, height, budget)
    if height == 0:
        return 1
    value = 1
    for _ in range(height):
        value = _up_exact(c, level - 1, value, budget)
    return value


def _exact(expr: BoundExpr, budget: int) -> int:
    if isinstance(expr, (Const, CeilReal)):
        return _checked(expr.value, budget)
    if isinstance(expr, UpArrow):
        return _up_exact(expr.c, expr.level, expr.height, budget)
    if isinstance(expr, Tow):
        values = [_exact(arg, budget) for arg in expr.args]
        result = _checked_pow(expr.c, values[-1], budget)
        for b in reversed(values[:-1]):
            result = _checked_pow(expr.c, _checked(b * result, budget), budget)
        return result
    if isinstance(expr, Power):
        return _checked_pow(_exact(expr.base, budget), _exact(expr.exponent, budget), budget)
    if isinstance(expr, Sum):
        return _checked(sum(_exact(t, budget) for t in expr.terms), budget)
    if isinstance(expr, Product):
        result = 1
        for term in expr.terms:
            result = _checked(result * _exact(term, budget), budget)
        return result
    if isinstance(expr, Binomial):
        n = _exact(expr.top, budget)
        if expr.bottom > n:
            return 0
        if expr.bottom * log2(max(n, 2)) > budget:
            raise _Overflow()
        return comb(n, expr.bottom)
    if isinstance(expr, Factorial):
        n = _exact(expr.arg, budget)
        if n > 1 and n * log2(n) > budget:
            raise _Overflow()
        return factorial(n)
    if isinstance(expr, Quotient):
        q, r = divmod(_exact(expr.numerator, budget), _exact(expr.denominator, budget))
        return q + (1 if r else 0)
    raise TypeError(f"未対応の式です: {expr!r}")


def evaluate(expr: BoundExpr, bit_budget: int) -> Union[int, BoundOverflow]:
    """ビット予算内なら厳密な整数を、超えるなら BoundOverflow を返す"""
    try:
        return _exact(expr, bit_budget)
    except _Overflow:
        return BoundOverflow(expr, magnitude(expr), bit_budget)


# --- 描画 ---


def _decimal(value: int) -> str:
    text = str(value)
    if len(text) > 60:
        return f"{text[:12]}...({len(text)} digits)"
    return text


def _structured(expr: BoundExpr) -> str:
    if isinstance(expr, Const):
        return _decimal(expr.value)
    if isinstance(expr, CeilReal):
        return f"ceil({expr.label})={_decimal(expr.value)}"
    if isinstance(expr, UpArrow):
        return f"{expr.c}↑^{expr.level}({expr.height})"
    if isinstance(expr, Tow):
        return f"TOW_{expr.c}(" + ", ".join(_structured(a) for a in expr.args) + ")"
    if isinstance(expr, Binomial):
        return f"C({_structured(expr.top)}, {expr.bottom})"
    if isinstance(expr, Factorial):
        return f"({_structured(expr.arg)})!"
    if isinstance(expr, Quotient):
        return f"{_structured(expr.numerator)} / {_structured(expr.denominator)}"
    if isinstance(expr, Power):
        return f"{_wrap(expr.base)}^{_wrap(expr.exponent)}"
    if isinstance(expr, Sum):
        return " + ".join(_structured(t) for t in expr.terms)
    if isinstance(expr, Product):
        return "·".join(_wrap(t) for t in expr.terms)
    raise TypeError(f"未対応の式です: {expr!r}")


def _wrap(expr: BoundExpr) -> str:
    text = _structured(expr)
    if isinstance(expr, (Const, UpArrow, Tow, Binomial, Factorial)):
        return text
    return f"({text})"


def _tower_text(expr: BoundExpr) -> str:
    expr = to_tower(expr)
    if isinstance(expr, Tow):
        c = expr.c
        text = f"{c}^{_wrap(expr.args[-1])}"
        for arg in reversed(expr.args[:-1]):
            if isinstance(arg, Const) and arg.value == 1:
                text = f"{c}^{text}"
            else:
                text = f"{c}^({_wrap(arg)}·{text})"
        return text
    return _structured(expr)


def render(
    expr: BoundExpr, style: RenderStyle = "structured", bit_budget: int = 2 ** 20
) -> str:
    """式を文字列に描画する

    Args:
        expr (BoundExpr): 描画する式
        style (RenderStyle): decimal（厳密値）/ tower（2^2^... 形式）/ structured（TOW 引数列）
        bit_budget (int): decimal で厳密評価するビット予算

    Returns:
        str: 描画結果
    """
    if style == "decimal":
        value = evaluate(expr, bit_budget)
        if isinstance(value, int):
            return str(value)
        return f"{_tower_text(expr)} (overflow)"
    if style == "tower":
        return _tower_text(expr)
    return _structured(expr)
