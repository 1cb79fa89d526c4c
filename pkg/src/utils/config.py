"""
JSDoc: ユーティリティモジュール - 設定
概要: 本ファイルは、計算予算やログレベルなどの実行設定を既定値と環境変数から組み立てるSettingsクラスを提供します。
仕様: Python (PEP8準拠、type hint使用)
制限: 優先順位は CLI 引数 > 環境変数 > 既定値
"""

from dataclasses import dataclass, fields, replace
from typing import Dict, Mapping, Optional
import os

from .errors import InputError, CLI_001


ENV_NAMES: Dict[str, str] = {
    "bit_budget": "RAMSEY_BIT_BUDGET",
    "search_budget": "RAMSEY_SEARCH_BUDGET",
    "enum_budget": "RAMSEY_ENUM_BUDGET",
    "detection_limit": "RAMSEY_DETECTION_LIMIT",
    "exact_inner_limit": "RAMSEY_EXACT_INNER_LIMIT",
    "asymptotic_margin": "RAMSEY_ASYMPTOTIC_MARGIN",
    "log_level": "RAMSEY_LOG_LEVEL",
}


@dataclass(frozen=True)
class Settings:
    """実行設定

    Attributes:
        bit_budget (int): 厳密評価を許す結果のビット長上限
        search_budget (int): 全探索で列挙する彩色数の上限
        enum_budget (int): 補題オラクルの列挙上限
        detection_limit (int): G_i の均質集合を全探索する頂点数の上限
        exact_inner_limit (int): 真の最大内部集合探索を許す |V| の上限
        asymptotic_margin (int): k < a + margin の漸近式に注記を付ける
        log_level (str): 画面表示するログの最小レベル
    """

    bit_budget: int = 2 ** 20
    search_budget: int = 10 ** 8
    enum_budget: int = 10 ** 7
    detection_limit: int = 24
    exact_inner_limit: int = 20
    asymptotic_margin: int = 3
    log_level: str = "INFO"

    def override(self, **values: Optional[object]) -> "Settings":
        """None でない値だけを上書きした設定を返す"""
        return replace(self, **{k: v for k, v in values.items() if v is not None})

    def describe(self) -> str:
        """設定を1行の key=value 形式で返す"""
        return " ".join(f"{f.name}={getattr(self, f.name)}" for f in fields(self))


def load_settings(environ: Optional[Mapping[str, str]] = None) -> Settings:
    """環境変数から設定を読み込む

    Args:
        environ (Optional[Mapping[str, str]]): 環境変数（省略時は os.environ）

    Returns:
        Settings: 読み込んだ設定

    Raises:
        InputError: 数値として解釈できない値が設定されている場合
    """
    env = os.environ if environ is None else environ
    values: Dict[str, object] = {}
    for name, var in ENV_NAMES.items():
        raw = env.get(var)
        if raw is None or raw == "":
            continue
        if name == "log_level":
            values[name] = raw.upper()
            continue
        try:
            number = int(raw, 0)
        except ValueError:
            raise InputError(CLI_001, f"環境変数 {var} が整数ではありません: {raw}")
        if number <= 0:
            raise InputError(CLI_001, f"環境変数 {var} は正の値が必要です: {raw}")
        values[name] = number
    return Settings().override(**values)
