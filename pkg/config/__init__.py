# config パッケージ
# VIPハッシュ ベンチマーク - 設定ファイル
