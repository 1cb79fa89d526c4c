# ユーティリティモジュールの初期化
