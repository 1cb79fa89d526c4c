# ハイパーグラフ基盤モジュールの初期化
