# 補題オラクルモジュールの初期化
