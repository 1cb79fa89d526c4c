# 検証モジュールの初期化
