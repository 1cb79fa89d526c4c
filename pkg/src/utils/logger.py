"""
JSDoc: ユーティリティモジュール - ログ機能
概要: 本ファイルは、抽出・探索・計算の実行履歴やエラー情報のログ記録、ログファイルへの保存、及び実行履歴のエクスポートを行うLoggerクラスを提供します。
仕様: Python (PEP8準拠、type hint使用)
制限: 出力は標準エラーへ行う（標準出力は計算結果専用）
"""

from typing import Dict, List, Optional
import datetime
import sys


LEVELS: Dict[str, int] = {"DEBUG": 10, "INFO": 20, "WARNING": 30, "ERROR": 40}


class Logger:
    """
    ログ管理を行うクラス

    記録は全レベル保持し、画面（stderr）への表示のみ level で絞り込む。

    Methods:
        log_debug(message: str) -> None: デバッグログの記録
        log_info(message: str) -> None: 情報ログの記録
        log_error(message: str) -> None: エラーログの記録
        log_warning(message: str) -> None: 警告ログの記録
        log_failure(message: str, code: str) -> None: エラーとエラーコードの記録
        save_logs(path: str) -> bool: ログファイル保存
        export_operation_history() -> str: 実行履歴のエクスポート
    """

    def __init__(self, level: Optional[str] = None, echo: bool = True) -> None:
        if level is None:
            # 循環 import を避けるため遅延読み込み
            from .config import load_settings

            level = load_settings().log_level
        self.level = LEVELS.get(level.upper(), LEVELS["INFO"])
        self.echo = echo
        self.logs: List[str] = []

    def _write(self, name: str, message: str) -> None:
        log_entry = f"{name} [{datetime.datetime.now()}]: {message}"
        self.logs.append(log_entry)
        if self.echo and LEVELS[name] >= self.level:
            print(log_entry, file=sys.stderr)

    def log_debug(self, message: str) -> None:
        """デバッグログを記録する

        Args:
            message (str): 記録するメッセージ
        """
        self._write("DEBUG", message)

    def log_info(self, message: str) -> None:
        """情報ログを記録する

        Args:
            message (str): 記録するメッセージ
        """
        self._write("INFO", message)

    def log_error(self, message: str) -> None:
        """エラーログを記録する

        Args:
            message (str): 記録するエラーメッセージ
        """
        self._write("ERROR", message)

    def log_warning(self, message: str) -> None:
        """警告ログを記録する

        Args:
            message (str): 記録する警告メッセージ
        """
        self._write("WARNING", message)

    def log_failure(self, message: str, code: str) -> None:
        """エラーメッセージに続けてエラーコードを記録する

        Args:
            message (str): 記録するエラーメッセージ
            code (str): ERROR_REFERENCE.md のエラーコード
        """
        self.log_error(message)
        self.log_error(f"エラーコード: {code}")

    def save_logs(self, path: str) -> bool:
        """ログファイルを指定のパスに保存する

        Args:
            path (str): 保存先のファイルパス

        Returns:
            bool: 保存に成功したかどうか
        """
        try:
            with open(path, "w", encoding="utf-8") as f:
                for entry in self.logs:
                    f.write(entry + "\n")
            return True
        except Exception as e:
            self.log_error(f"ログの保存に失敗しました: {e}")
            return False

    def export_operation_history(self) -> str:
        """実行履歴をエクスポートする

        Returns:
            str: エクスポートされた実行履歴（DEBUG を除く）
        """
        return "\n".join(entry for entry in self.logs if not entry.startswith("DEBUG"))
