# テストパッケージの初期化
