"""
JSDoc: ユーティリティモジュール - 例外定義
概要: 本ファイルは、ライブラリ全体で共有する例外クラスとエラーコードを定義します。
仕様: Python (PEP8準拠、type hint使用)
制限: エラーコードの意味は ERROR_REFERENCE.md を参照
"""

# エラーコードの定義
HYP_001 = "HYP_001"  # 辺の指定が不正（未ソート・範囲外）
HYP_002 = "HYP_002"  # 彩色ファイルの読み込みに失敗
HYP_003 = "HYP_003"  # 均質性判定の入力が不正
HYP_004 = "HYP_004"  # 多数派クラスの入力が空
BND_001 = "BND_001"  # 上界ファミリとパラメータの組合せが不正
BND_002 = "BND_002"  # TOW / 上矢印の引数が不正
BND_003 = "BND_003"  # 補題 恒等式の番号・束縛が不正
EXT_001 = "EXT_001"  # 抽出器の前提条件違反
EXT_002 = "EXT_002"  # 均質集合の検出予算超過
EXT_003 = "EXT_003"  # トレースの読み込みに失敗
LEM_001 = "LEM_001"  # 補題オラクルの引数が不正
LEM_002 = "LEM_002"  # 列挙予算超過
VER_001 = "VER_001"  # 探索クエリが不正
VER_002 = "VER_002"  # 探索予算超過
VER_003 = "VER_003"  # 実行検証で法則違反を検出
CLI_001 = "CLI_001"  # コマンドライン引数が不正
SYS_001 = "SYS_001"  # 予期せぬエラー

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_BUDGET = 3
EXIT_INVARIANT = 4


class RamseyError(Exception):
    """ライブラリ共通の基底例外

    Attributes:
        code (str): エラーコード
        message (str): エラーメッセージ
        exit_code (int): CLI の終了コード
    """

    exit_code = 1

    def __init__(self, code: str, message: str) -> None:
        super().__init__(f"[{code}] {message}")
        self.code = code
        self.message = message


class InputError(RamseyError):
    """パラメータや入力ファイルが不正な場合の例外"""

    exit_code = EXIT_INPUT


class BudgetExceededError(RamseyError):
    """列挙・探索の予算を超えた場合の例外

    Attributes:
        frontier (object): 打ち切り時点までに確定した情報（任意）
    """

    exit_code = EXIT_BUDGET

    def __init__(self, code: str, message: str, frontier: object = None) -> None:
        super().__init__(code, message)
        self.frontier = frontier


class InvariantViolationError(RamseyError):
    """トレースから再導出した法則が成り立たない場合の例外"""

    exit_code = EXIT_INVARIANT
