# 上界計算モジュールの初期化
