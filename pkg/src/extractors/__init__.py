# 均質集合抽出モジュールの初期化
